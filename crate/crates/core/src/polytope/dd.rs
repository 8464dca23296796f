//! Double description method for pointed polyhedral cones, exact rationals.
//!
//! Input: rows a_i defining the cone {z : a_i . z >= 0 for all i}. Output:
//! the extreme rays, each normalized to a primitive integer vector. The cone
//! must be pointed (the rows must span full rank), which the callers ensure
//! by homogenizing bounded polytopes with an explicit t >= 0 row.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::linalg::{dot, invert, rank, Row};
use crate::error::{Error, Result};
use crate::scalar::Rational;

struct Ray {
    v: Vec<Rational>,
    /// tight[i] = constraint i holds with equality; covers all constraints.
    tight: u64,
}

fn normalize(mut v: Vec<Rational>) -> Vec<Rational> {
    let mut lcm = BigInt::from(1u32);
    for x in &v {
        lcm = lcm.lcm(x.denom());
    }
    let mut gcd = BigInt::zero();
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    for i in &ints {
        gcd = gcd.gcd(i);
    }
    if gcd.is_zero() {
        return v;
    }
    for (slot, i) in v.iter_mut().zip(ints) {
        *slot = Rational::from_integer(i / &gcd);
    }
    v
}

fn tight_mask(constraints: &[Row], v: &[Rational]) -> u64 {
    let mut mask = 0u64;
    for (i, row) in constraints.iter().enumerate() {
        if dot(row, v).is_zero() {
            mask |= 1 << i;
        }
    }
    mask
}

/// Extreme rays of the pointed cone cut out by `constraints`.
pub fn extreme_rays(constraints: &[Row]) -> Result<Vec<Vec<Rational>>> {
    let m = match constraints.first() {
        Some(r) => r.len(),
        None => return Err(Error::UnboundedPolytope),
    };
    if constraints.len() > 64 {
        // tightness masks are u64; enough for every desk-scale polytope here
        return Err(Error::DimensionGuard {
            n: constraints.len(),
            max: 64,
            what: "double description constraint masks",
        });
    }
    // greedily pick m independent rows for the initial simplicial cone
    let mut base_idx: Vec<usize> = Vec::new();
    let mut picked: Vec<Row> = Vec::new();
    for (i, row) in constraints.iter().enumerate() {
        picked.push(row.clone());
        if rank(&picked) == picked.len() {
            base_idx.push(i);
        } else {
            picked.pop();
        }
        if picked.len() == m {
            break;
        }
    }
    if picked.len() < m {
        return Err(Error::UnboundedPolytope);
    }
    let inv = invert(&picked).expect("independent rows");
    // rays = columns of the inverse: base row i dots ray j to delta_ij >= 0
    let mut rays: Vec<Ray> = (0..m)
        .map(|j| {
            let v = normalize((0..m).map(|i| inv[i][j].clone()).collect());
            let tight = tight_mask(constraints, &v);
            Ray { v, tight }
        })
        .collect();

    let mut processed: u64 = base_idx.iter().fold(0, |acc, &i| acc | (1 << i));
    for (ci, row) in constraints.iter().enumerate() {
        if processed & (1 << ci) != 0 {
            continue;
        }
        let signs: Vec<Rational> = rays.iter().map(|r| dot(row, &r.v)).collect();
        let mut keep: Vec<Ray> = Vec::new();
        let mut plus: Vec<usize> = Vec::new();
        let mut minus: Vec<usize> = Vec::new();
        for (idx, s) in signs.iter().enumerate() {
            if s.is_positive() {
                plus.push(idx);
            } else if s.is_negative() {
                minus.push(idx);
            }
        }
        // adjacency: no third ray's tight set contains the pair's common set
        let mut fresh: Vec<Vec<Rational>> = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let common = rays[p].tight & rays[q].tight & processed;
                let blocked = rays.iter().enumerate().any(|(o, other)| {
                    o != p && o != q && (other.tight & processed) & common == common
                });
                if blocked {
                    continue;
                }
                let sp = &signs[p];
                let sq = &signs[q];
                let v: Vec<Rational> = rays[p]
                    .v
                    .iter()
                    .zip(&rays[q].v)
                    .map(|(vp, vq)| vq * sp - vp * sq)
                    .collect();
                fresh.push(normalize(v));
            }
        }
        for (idx, ray) in rays.drain(..).enumerate() {
            if !signs[idx].is_negative() {
                keep.push(ray);
            }
        }
        for v in fresh {
            let tight = tight_mask(constraints, &v);
            keep.push(Ray { v, tight });
        }
        rays = keep;
        processed |= 1 << ci;
    }
    Ok(rays.into_iter().map(|r| r.v).collect())
}
