//! Permanent bounds, structural zero tests, the scaled all-ones identity, and
//! numerical probes of the positivity conjectures for line-stochastic tensors.
//!
//! The permanent values in every report stay exact; floats appear only where
//! a bound itself is irrational, and those comparisons run in log space with
//! an explicit tolerance band.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::combinat::{diagonal_patterns, DiagonalPattern};
use crate::error::{Error, Result};
use crate::permanent::{per1, per2_3d};
use crate::scalar::{ln_factorial, ln_rational, Rational};
use crate::tensor::{IndexIter, MultiIndex, Tensor};

/// Absolute log-space tolerance for irrational bound comparisons.
pub const LOG_TOLERANCE: f64 = 1e-9;

/// Default ceiling on subset combinations visited by the zero-block search.
pub const DEFAULT_ZERO_BLOCK_BUDGET: u64 = 10_000_000;

/// Per-axis index subsets spanning an all-zero block with
/// sum |S_k| = 1 + n_2 + ... + n_d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroBlockCertificate {
    pub subsets: Vec<Vec<usize>>,
}

impl ZeroBlockCertificate {
    pub fn block_dims(&self) -> Vec<usize> {
        self.subsets.iter().map(|s| s.len()).collect()
    }
}

/// Outcome of a bound comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundStatus {
    Holds,
    /// |lhs - rhs| fell inside the tolerance band; no pass/fail claim.
    TightWithinTolerance,
    Violated,
}

impl std::fmt::Display for BoundStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundStatus::Holds => write!(f, "holds"),
            BoundStatus::TightWithinTolerance => write!(f, "tight-within-tolerance"),
            BoundStatus::Violated => write!(f, "violated"),
        }
    }
}

/// One bound check: the exact permanent value, the structural sums that feed
/// the bound, and the comparison verdict.
#[derive(Clone, Debug)]
pub struct BoundReport {
    /// Exact value of the permanent the bound constrains (1-per or 2-per).
    pub per_value: Rational,
    /// Hyperplane sums r_i (when the bound uses them).
    pub hyperplane_sums: Option<Vec<u64>>,
    /// Tube sums r_ij flattened row-major (when the bound uses them).
    pub tube_sums: Option<Vec<u64>>,
    /// Zero count t (when the bound uses it).
    pub zero_count: Option<usize>,
    /// Exact rational bound, for bounds that stay rational.
    pub bound_exact: Option<Rational>,
    /// log of the bound, for irrational bounds.
    pub bound_log: Option<f64>,
    /// log of the permanent (None when the permanent is 0).
    pub per_log: Option<f64>,
    pub status: BoundStatus,
}

fn require_zero_one(a: &Tensor) -> Result<()> {
    if a.is_zero_one() {
        Ok(())
    } else {
        Err(Error::NotZeroOne)
    }
}

/// Searches for a zero block certifying per = 0. Exhaustive over per-axis
/// index subsets with size-sum pruning, visiting at most `budget` subset
/// combinations.
pub fn find_zero_block(a: &Tensor) -> Result<Option<ZeroBlockCertificate>> {
    find_zero_block_with_budget(a, DEFAULT_ZERO_BLOCK_BUDGET)
}

pub fn find_zero_block_with_budget(
    a: &Tensor,
    budget: u64,
) -> Result<Option<ZeroBlockCertificate>> {
    if a.order() < 2 {
        return Err(Error::BadOrder {
            got: a.order(),
            need: ">= 2",
        });
    }
    let dims = a.dims();
    let target: usize = 1 + dims.iter().skip(1).sum::<usize>();
    let mut chosen: Vec<Vec<usize>> = Vec::with_capacity(dims.len());
    let mut visited = 0u64;

    fn block_is_zero(a: &Tensor, subsets: &[Vec<usize>]) -> bool {
        let shape: Vec<usize> = subsets.iter().map(|s| s.len()).collect();
        if shape.iter().any(|&m| m == 0) {
            return true; // empty block, vacuously zero
        }
        for pick in IndexIter::new(shape) {
            let idx: Vec<usize> = pick
                .coords()
                .iter()
                .enumerate()
                .map(|(axis, &p)| subsets[axis][p - 1])
                .collect();
            if !a.get(&idx).is_zero() {
                return false;
            }
        }
        true
    }

    fn search(
        a: &Tensor,
        chosen: &mut Vec<Vec<usize>>,
        remaining_target: usize,
        visited: &mut u64,
        budget: u64,
    ) -> Result<Option<ZeroBlockCertificate>> {
        let axis = chosen.len();
        let dims = a.dims();
        if axis == dims.len() {
            if remaining_target != 0 {
                return Ok(None);
            }
            *visited += 1;
            if *visited > budget {
                return Err(Error::ResourceGuard {
                    visited: *visited,
                    budget,
                });
            }
            if block_is_zero(a, chosen) {
                return Ok(Some(ZeroBlockCertificate {
                    subsets: chosen.clone(),
                }));
            }
            return Ok(None);
        }
        let rest_max: usize = dims.iter().skip(axis + 1).sum();
        let n = dims[axis];
        // subsets in ascending bitmask order for determinism
        for mask in 0u32..(1 << n) {
            let m = mask.count_ones() as usize;
            if m > remaining_target || remaining_target - m > rest_max {
                continue;
            }
            let subset: Vec<usize> = (1..=n).filter(|&v| mask & (1 << (v - 1)) != 0).collect();
            chosen.push(subset);
            let hit = search(a, chosen, remaining_target - m, visited, budget)?;
            chosen.pop();
            if hit.is_some() {
                return Ok(hit);
            }
        }
        Ok(None)
    }

    search(a, &mut chosen, target, &mut visited, budget)
}

/// Lower bound for cubical (0,1)-tensors: per >= (n^{d-1} - t) ((n-1)!)^{d-1}
/// with t the number of zero entries. Exact comparison.
pub fn lower_bound_01(a: &Tensor) -> Result<BoundReport> {
    let n = a.cubical_dim()?;
    require_zero_one(a)?;
    let d = a.order();
    let t = a.zero_count();
    let fact: u128 = (1..=(n.saturating_sub(1)) as u128).product();
    let cells = (n as i128).pow(d as u32 - 1) - t as i128;
    let bound = Rational::from_integer(cells.into())
        * Rational::from_integer(fact.into()).pow(d as i32 - 1);
    let per = per1(a)?;
    let status = if per == bound {
        BoundStatus::TightWithinTolerance
    } else if per > bound {
        BoundStatus::Holds
    } else {
        BoundStatus::Violated
    };
    Ok(BoundReport {
        per_value: per,
        hyperplane_sums: None,
        tube_sums: None,
        zero_count: Some(t),
        bound_exact: Some(bound),
        bound_log: None,
        per_log: None,
        status,
    })
}

fn log_space_report(per: Rational, bound_log: f64) -> BoundReport {
    let per_log = if per.is_zero() {
        None
    } else {
        Some(ln_rational(&per))
    };
    let status = match per_log {
        None => BoundStatus::Holds, // bound factors are all >= 1
        Some(lhs) => {
            if (lhs - bound_log).abs() < LOG_TOLERANCE {
                BoundStatus::TightWithinTolerance
            } else if lhs < bound_log {
                BoundStatus::Holds
            } else {
                BoundStatus::Violated
            }
        }
    };
    BoundReport {
        per_value: per,
        hyperplane_sums: None,
        tube_sums: None,
        zero_count: None,
        bound_exact: None,
        bound_log: Some(bound_log),
        per_log,
        status,
    }
}

/// Minc-Bregman type bound for the 1-permanent of an order-3 cubical
/// (0,1)-tensor: per(A) <= prod_i (r_i!)^{1/r_i} with r_i the axis-1
/// hyperplane sums; r_i = 0 contributes factor 1 (and forces per = 0).
pub fn minc_bregman_1(a: &Tensor) -> Result<BoundReport> {
    let n = a.cubical_dim()?;
    if a.order() != 3 {
        return Err(Error::BadOrder {
            got: a.order(),
            need: "3",
        });
    }
    require_zero_one(a)?;
    let mut sums = Vec::with_capacity(n);
    for i in 1..=n {
        let mut r = 0u64;
        for j in 1..=n {
            for k in 1..=n {
                if a.get(&[i, j, k]).is_one() {
                    r += 1;
                }
            }
        }
        sums.push(r);
    }
    let bound_log: f64 = sums
        .iter()
        .filter(|&&r| r > 0)
        .map(|&r| ln_factorial(r) / r as f64)
        .sum();
    let mut report = log_space_report(per1(a)?, bound_log);
    report.hyperplane_sums = Some(sums);
    Ok(report)
}

/// Minc-Bregman type bound for the 2-permanent of an order-3 cubical
/// (0,1)-tensor, with the product taken over all tube sums r_ij = sum_k a_ijk.
pub fn minc_bregman_2(a: &Tensor) -> Result<BoundReport> {
    let n = a.cubical_dim()?;
    if a.order() != 3 {
        return Err(Error::BadOrder {
            got: a.order(),
            need: "3",
        });
    }
    require_zero_one(a)?;
    let mut sums = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let mut r = 0u64;
            for k in 1..=n {
                if a.get(&[i, j, k]).is_one() {
                    r += 1;
                }
            }
            sums.push(r);
        }
    }
    let bound_log: f64 = sums
        .iter()
        .filter(|&&r| r > 0)
        .map(|&r| ln_factorial(r) / r as f64)
        .sum();
    let mut report = log_space_report(per2_3d(a)?, bound_log);
    report.tube_sums = Some(sums);
    Ok(report)
}

/// If some plus-projection of a nonnegative order-3 tensor contains a zero,
/// Per(A) = 0. Returns the witness (dropped axis, matrix cell) when the
/// hypothesis holds; `None` is no conclusion.
pub fn plus_projection_zero_test(a: &Tensor) -> Result<Option<(usize, MultiIndex)>> {
    if a.order() != 3 {
        return Err(Error::BadOrder {
            got: a.order(),
            need: "3",
        });
    }
    if let Some(idx) = a.first_negative() {
        return Err(Error::NegativeEntry(idx.coords().to_vec()));
    }
    for axis in 1..=3 {
        let proj = a.plus_projection(axis)?;
        for idx in proj.indices() {
            if proj.get(idx.coords()).is_zero() {
                return Ok(Some((axis, idx)));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct DichotomyReport {
    /// (t, Per(tP + (1-t)Q)) per requested parameter.
    pub values: Vec<(Rational, Rational)>,
    /// true when every sampled point had Per = 0, false when none did.
    pub all_zero: bool,
}

/// Evaluates Per(tP + (1-t)Q) at each t in (0,1) and checks the zero pattern
/// is all-or-nothing. P and Q must be nonnegative with Per = 0 each.
pub fn segment_dichotomy(p: &Tensor, q: &Tensor, ts: &[Rational]) -> Result<DichotomyReport> {
    if p.dims() != q.dims() {
        return Err(Error::ShapeMismatch(p.dims().to_vec(), q.dims().to_vec()));
    }
    if p.order() != 3 || !p.is_cubical() {
        return Err(Error::Precondition("need cubical order-3 tensors".into()));
    }
    for t in [p, q] {
        if let Some(idx) = t.first_negative() {
            return Err(Error::NegativeEntry(idx.coords().to_vec()));
        }
        if !per2_3d(t)?.is_zero() {
            return Err(Error::Precondition("endpoints must have Per = 0".into()));
        }
    }
    let one = Rational::one();
    let mut values = Vec::with_capacity(ts.len());
    for t in ts {
        if !(t.is_positive() && *t < one) {
            return Err(Error::Precondition(format!("t = {t} outside (0,1)")));
        }
        let mix = p.scale(t).add(&q.scale(&(&one - t)))?;
        values.push((t.clone(), per2_3d(&mix)?));
    }
    let zeros = values.iter().filter(|(_, v)| v.is_zero()).count();
    assert!(
        zeros == 0 || zeros == values.len(),
        "zero pattern must be constant along the open segment"
    );
    Ok(DichotomyReport {
        all_zero: zeros == values.len(),
        values,
    })
}

/// The conjectured minimum (n!/n^n)^{d-1} over the permutation-tensor hull.
pub fn vdw_analog(n: usize, d: usize) -> Rational {
    let fact: u128 = (1..=n as u128).product();
    let ratio = Rational::new(fact.into(), (n as u128).pow(n as u32).into());
    ratio.pow(d as i32 - 1)
}

/// Verifies per1((1/n^{d-1}) J_n) equals the analog value exactly.
pub fn check_scaled_j(n: usize, d: usize) -> Result<bool> {
    let scale = Rational::new(1.into(), (n as u128).pow(d as u32 - 1).into());
    let scaled = Tensor::ones(n, d).scale(&scale);
    Ok(per1(&scaled)? == vdw_analog(n, d))
}

/// How `probe_conjectures` draws line-stochastic samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeSampler {
    /// Exact convex combinations of line-permutation tensors (members of the
    /// hull, which does not cover the whole stochastic polytope).
    ConvexCombination,
    /// Sinkhorn-style normalization of a positive float tensor, rationalized
    /// before the exact permanent evaluation; line sums are only approximate.
    SinkhornFloat,
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub order: usize,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub sampler: ProbeSampler,
    /// Number of line-permutation generators available (convex mode).
    pub generator_count: usize,
    pub min_per: Option<Rational>,
    pub min_sample: Option<usize>,
    pub zero_count: usize,
}

/// Samples line-stochastic tensors and reports the minimum 1-permanent seen
/// and any exact zeros. An empirical probe: it proves nothing either way.
pub fn probe_conjectures(
    d: usize,
    n: usize,
    samples: usize,
    seed: u64,
    sampler: ProbeSampler,
) -> Result<ProbeReport> {
    if d < 2 || n < 1 {
        return Err(Error::Precondition("need d >= 2 and n >= 1".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let generators: Vec<Tensor> = match sampler {
        ProbeSampler::ConvexCombination => diagonal_patterns(d, n, d - 1)?
            .map(|p| p.map(|pat: DiagonalPattern| pat.to_tensor()))
            .collect::<Result<Vec<_>>>()?,
        ProbeSampler::SinkhornFloat => Vec::new(),
    };
    if sampler == ProbeSampler::ConvexCombination && generators.is_empty() {
        return Err(Error::Precondition(format!(
            "no line-permutation tensors exist for d={d}, n={n}"
        )));
    }

    let mut min_per: Option<Rational> = None;
    let mut min_sample = None;
    let mut zero_count = 0usize;
    for s in 0..samples {
        let tensor = match sampler {
            ProbeSampler::ConvexCombination => {
                let mut weights: Vec<u64> = (0..generators.len())
                    .map(|_| rng.gen_range(0..=16u64))
                    .collect();
                if weights.iter().all(|&w| w == 0) {
                    let bump = rng.gen_range(0..weights.len());
                    weights[bump] = 1;
                }
                let total: u64 = weights.iter().sum();
                let mut mix = Tensor::zeros(vec![n; d])?;
                for (g, &w) in generators.iter().zip(&weights) {
                    if w > 0 {
                        let lambda = Rational::new(w.into(), total.into());
                        mix = mix.add(&g.scale(&lambda))?;
                    }
                }
                mix
            }
            ProbeSampler::SinkhornFloat => sinkhorn_sample(d, n, &mut rng)?,
        };
        let per = per1(&tensor)?;
        if per.is_zero() {
            zero_count += 1;
        }
        if min_per.as_ref().map_or(true, |m| per < *m) {
            min_per = Some(per);
            min_sample = Some(s);
        }
    }
    Ok(ProbeReport {
        order: d,
        dim: n,
        samples,
        seed,
        sampler,
        generator_count: generators.len(),
        min_per,
        min_sample,
        zero_count,
    })
}

/// Draws a positive tensor and cycles line normalizations along each axis
/// until all line sums are within 1e-12 of 1, then rationalizes the floats.
fn sinkhorn_sample(d: usize, n: usize, rng: &mut ChaCha20Rng) -> Result<Tensor> {
    let len = n.pow(d as u32);
    let mut vals: Vec<f64> = (0..len).map(|_| rng.gen_range(0.05..1.0)).collect();
    let dims = vec![n; d];
    let probe = Tensor::zeros(dims.clone())?;
    for _round in 0..500 {
        let mut worst: f64 = 0.0;
        for axis in 0..d {
            // every line along `axis`: iterate over the other coordinates
            let other_dims: Vec<usize> = (0..d).filter(|&x| x != axis).map(|x| dims[x]).collect();
            for rest in IndexIter::new(other_dims) {
                let mut idx = vec![0usize; d];
                let mut at = 0;
                for (x, slot) in idx.iter_mut().enumerate() {
                    if x != axis {
                        *slot = rest.coords()[at];
                        at += 1;
                    }
                }
                let offsets: Vec<usize> = (1..=n)
                    .map(|v| {
                        idx[axis] = v;
                        probe.offset(&idx)
                    })
                    .collect();
                let sum: f64 = offsets.iter().map(|&o| vals[o]).sum();
                worst = worst.max((sum - 1.0).abs());
                for &o in &offsets {
                    vals[o] /= sum;
                }
            }
        }
        if worst < 1e-12 {
            break;
        }
    }
    let entries: Vec<Rational> = vals
        .iter()
        .map(|&v| Rational::from_float(v).expect("finite"))
        .collect();
    Tensor::new(dims, entries)
}
