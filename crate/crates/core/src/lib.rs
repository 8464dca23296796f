//! Exact permanent-type functions of dense tensors.
//!
//! The crate computes 1-, 2-, and k-permanents, Cayley's combinatorial
//! hyperdeterminant, and character-weighted generalized tensor functions of
//! dense rational tensors; verifies permanent bounds and stochasticity
//! structure; and enumerates the vertices of small stochastic-tensor
//! polytopes with exact rational arithmetic throughout.

pub mod bounds;
pub mod cli;
pub mod combinat;
pub mod error;
pub mod genfun;
pub mod ht;
pub mod permanent;
pub mod polytope;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::Rational;
pub use tensor::{MultiIndex, PlaneSelector, Tensor};
