//! Permanent-type sums with mutually independent evaluation routes.
//!
//! `per1` is the injection-sum definition, `per_symmetric` the n!-normalized
//! symmetric form, `per_hamming` the distance-d multi-index form, `per_laplace`
//! the recursive expansion, and `kper` the sum over k-per index patterns. They
//! agree on cubical inputs and the test suites lean on that redundancy.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::combinat::{self, permutations, perm_tuples_distance_n, Permutation};
use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::tensor::Tensor;

/// 1-permanent: sum over injection tuples sigma_k: [n_1] -> [n_k] of the
/// products a_{i, sigma_2(i), ..., sigma_d(i)}; 0 when n_1 exceeds some n_k.
pub fn per1(a: &Tensor) -> Result<Rational> {
    if a.order() < 2 {
        return Err(Error::BadOrder {
            got: a.order(),
            need: ">= 2",
        });
    }
    let n1 = a.dims()[0];
    if a.dims().iter().skip(1).any(|&nk| n1 > nk) {
        return Ok(Rational::zero());
    }
    Ok(anchored_injection_sum(a, 0))
}

/// The modified definition: the anchor axis is the first axis of minimum
/// extent and carries the identity map; injections feed the other axes.
/// Coincides with `per1` when the first axis attains the minimum.
pub fn per1_min(a: &Tensor) -> Result<Rational> {
    if a.order() < 2 {
        return Err(Error::BadOrder {
            got: a.order(),
            need: ">= 2",
        });
    }
    let min = *a.dims().iter().min().expect("order >= 2");
    let anchor = a.dims().iter().position(|&nk| nk == min).expect("nonempty");
    Ok(anchored_injection_sum(a, anchor))
}

/// Sum over choices of one cell per anchor index i = 1..n_anchor, injective on
/// every non-anchor axis. A depth-first search over i with per-axis used sets;
/// the top level fans out in parallel.
fn anchored_injection_sum(a: &Tensor, anchor: usize) -> Rational {
    let d = a.order();
    let n = a.dims()[anchor];
    let free_axes: Vec<usize> = (0..d).filter(|&ax| ax != anchor).collect();

    fn descend(
        a: &Tensor,
        anchor: usize,
        free_axes: &[usize],
        used: &mut [Vec<bool>],
        idx: &mut [usize],
        i: usize,
        n: usize,
        partial: &Rational,
    ) -> Rational {
        if i > n {
            return partial.clone();
        }
        let mut total = Rational::zero();
        let mut choice = vec![0usize; free_axes.len()];
        loop {
            // advance the odometer over free-axis values
            let mut pos = 0;
            while pos < free_axes.len() {
                let ax = free_axes[pos];
                choice[pos] += 1;
                if choice[pos] <= a.dims()[ax] {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == free_axes.len() {
                break;
            }
            if choice.iter().any(|&v| v == 0) {
                continue;
            }
            if choice
                .iter()
                .enumerate()
                .any(|(p, &v)| used[free_axes[p]][v - 1])
            {
                continue;
            }
            idx[anchor] = i; // deeper recursion levels leave this stale
            for (p, &v) in choice.iter().enumerate() {
                idx[free_axes[p]] = v;
            }
            let entry = a.get(idx);
            if entry.is_zero() {
                continue;
            }
            for (p, &v) in choice.iter().enumerate() {
                used[free_axes[p]][v - 1] = true;
            }
            let next = partial * entry;
            total += descend(a, anchor, free_axes, used, idx, i + 1, n, &next);
            for (p, &v) in choice.iter().enumerate() {
                used[free_axes[p]][v - 1] = false;
            }
        }
        total
    }

    // parallel split over the first anchor index's cell choice
    let first_choices: Vec<Vec<usize>> = {
        let mut out = Vec::new();
        let mut stack = vec![(0usize, Vec::<usize>::new())];
        while let Some((pos, partial)) = stack.pop() {
            if pos == free_axes.len() {
                let mut full = vec![0usize; d];
                full[anchor] = 1;
                for (p, &v) in partial.iter().enumerate() {
                    full[free_axes[p]] = v;
                }
                out.push(full);
                continue;
            }
            let ax = free_axes[pos];
            for v in (1..=a.dims()[ax]).rev() {
                let mut next = partial.clone();
                next.push(v);
                stack.push((pos + 1, next));
            }
        }
        out.sort();
        out
    };

    first_choices
        .par_iter()
        .map(|full| {
            let entry = a.get(full);
            if entry.is_zero() {
                return Rational::zero();
            }
            let mut used: Vec<Vec<bool>> = a.dims().iter().map(|&nk| vec![false; nk]).collect();
            for &ax in &free_axes {
                used[ax][full[ax] - 1] = true;
            }
            let mut idx = full.clone();
            descend(
                a,
                anchor,
                &free_axes,
                &mut used,
                &mut idx,
                2,
                n,
                &entry.clone(),
            )
        })
        .reduce(Rational::zero, |x, y| x + y)
}

/// Symmetric form on cubical tensors: (1/n!) sum over d-tuples of
/// permutations of the products a_{pi_1(i)...pi_d(i)}.
pub fn per_symmetric(a: &Tensor) -> Result<Rational> {
    let n = a.cubical_dim()?;
    let d = a.order();
    let perms: Vec<Permutation> = permutations(n).collect();
    let factorial = Rational::from_integer(perms.len().into());

    let total: Rational = perms
        .par_iter()
        .map(|first| {
            let mut tuple: Vec<&Permutation> = vec![&perms[0]; d];
            tuple[0] = first;
            let mut slots = vec![0usize; d]; // slots[0] pinned to `first`
            let mut sum = Rational::zero();
            loop {
                let mut term = Rational::one();
                let mut idx = vec![0usize; d];
                for i in 1..=n {
                    for (k, p) in tuple.iter().enumerate() {
                        idx[k] = p.image(i);
                    }
                    term *= a.get(&idx);
                    if term.is_zero() {
                        break;
                    }
                }
                sum += term;
                // odometer over slots 1..d
                let mut pos = 1;
                while pos < d {
                    slots[pos] += 1;
                    if slots[pos] < perms.len() {
                        tuple[pos] = &perms[slots[pos]];
                        break;
                    }
                    slots[pos] = 0;
                    tuple[pos] = &perms[0];
                    pos += 1;
                }
                if pos == d {
                    break;
                }
            }
            sum
        })
        .reduce(Rational::zero, |x, y| x + y);
    Ok(total / factorial)
}

/// Hamming-distance form on cubical tensors: sum over unordered selections of
/// n multi-indexes, pairwise distance d, of the product of the selected cells.
pub fn per_hamming(a: &Tensor) -> Result<Rational> {
    let n = a.cubical_dim()?;
    let d = a.order();
    let cells: Vec<Vec<usize>> = a.indices().map(|m| m.coords().to_vec()).collect();

    fn search(
        a: &Tensor,
        cells: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        from: usize,
        want: usize,
        d: usize,
        partial: &Rational,
    ) -> Rational {
        if chosen.len() == want {
            return partial.clone();
        }
        let mut total = Rational::zero();
        for pos in from..cells.len() {
            let cand = &cells[pos];
            if chosen
                .iter()
                .any(|&c| combinat::hamming(&cells[c], cand).unwrap() != d)
            {
                continue;
            }
            let entry = a.get(cand);
            if entry.is_zero() {
                continue;
            }
            chosen.push(pos);
            let next = partial * entry;
            total += search(a, cells, chosen, pos + 1, want, d, &next);
            chosen.pop();
        }
        total
    }

    let mut chosen = Vec::new();
    Ok(search(a, &cells, &mut chosen, 0, n, d, &Rational::one()))
}

/// 2-permanent of an order-3 cubical tensor: sum over distance-n tuples
/// (pi_1..pi_n) of the product over slices i of the slice-i diagonal product
/// prod_j a_{j, pi_i(j), i}.
pub fn per2_3d(a: &Tensor) -> Result<Rational> {
    if a.order() != 3 {
        return Err(Error::BadOrder {
            got: a.order(),
            need: "3",
        });
    }
    let n = a.cubical_dim()?;
    let mut total = Rational::zero();
    for tuple in perm_tuples_distance_n(n, n) {
        let tuple = tuple?;
        let mut term = Rational::one();
        'outer: for (i0, p) in tuple.perms().iter().enumerate() {
            for j in 1..=n {
                let e = a.get(&[j, p.image(j), i0 + 1]);
                if e.is_zero() {
                    term = Rational::zero();
                    break 'outer;
                }
                term *= e;
            }
        }
        total += term;
    }
    Ok(total)
}

/// k-permanent: sum over all k-per index patterns of the product of the
/// pattern's entries; 0 when no pattern exists.
pub fn kper(a: &Tensor, k: usize) -> Result<Rational> {
    let n = a.cubical_dim()?;
    let d = a.order();
    if k < 1 || k >= d {
        return Err(Error::LevelOutOfRange { k, order: d });
    }
    let mut total = Rational::zero();
    for pattern in combinat::diagonal_patterns(d, n, k)? {
        total += pattern?.product_over(a);
    }
    Ok(total)
}

/// Laplace expansion along the first remaining index of axis 1, memoized on
/// the tuple of remaining index sets of axes 2..d.
pub fn per_laplace(a: &Tensor) -> Result<Rational> {
    per_laplace_with_cache(a, None)
}

/// `cache_capacity` caps the number of memoized minors (`None` = unlimited).
pub fn per_laplace_with_cache(a: &Tensor, cache_capacity: Option<usize>) -> Result<Rational> {
    if a.order() < 2 {
        return Err(Error::BadOrder {
            got: a.order(),
            need: ">= 2",
        });
    }
    let n = a.cubical_dim()?;
    let d = a.order();
    if n > 32 {
        return Err(Error::DimensionGuard {
            n,
            max: 32,
            what: "Laplace expansion index masks",
        });
    }

    struct Ctx<'a> {
        a: &'a Tensor,
        n: usize,
        d: usize,
        memo: HashMap<Vec<u32>, Rational>,
        cap: Option<usize>,
    }

    // sets[j] is the bitmask of remaining indexes on axis j+2; axis 1 keeps
    // indexes depth+1..n where depth = n - |sets[0]|
    fn expand(ctx: &mut Ctx, sets: &mut Vec<u32>, depth: usize) -> Rational {
        if depth == ctx.n {
            return Rational::one();
        }
        if let Some(hit) = ctx.memo.get(sets.as_slice()) {
            return hit.clone();
        }
        let anchor = depth + 1;
        let mut idx = vec![0usize; ctx.d];
        idx[0] = anchor;
        let mut total = Rational::zero();
        let free: Vec<Vec<usize>> = sets
            .iter()
            .map(|&mask| (1..=ctx.n).filter(|&v| mask & (1 << (v - 1)) != 0).collect())
            .collect();
        let mut choice = vec![0usize; ctx.d - 1];
        loop {
            for (p, &c) in choice.iter().enumerate() {
                idx[p + 1] = free[p][c];
            }
            let entry = ctx.a.get(&idx).clone();
            if !entry.is_zero() {
                for (p, &c) in choice.iter().enumerate() {
                    sets[p] &= !(1 << (free[p][c] - 1));
                }
                let minor = expand(ctx, sets, depth + 1);
                for (p, &c) in choice.iter().enumerate() {
                    sets[p] |= 1 << (free[p][c] - 1);
                }
                total += entry * minor;
            }
            let mut pos = 0;
            while pos < choice.len() {
                choice[pos] += 1;
                if choice[pos] < free[pos].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == choice.len() {
                break;
            }
        }
        if ctx.cap.map_or(true, |cap| ctx.memo.len() < cap) {
            ctx.memo.insert(sets.clone(), total.clone());
        }
        total
    }

    let mut ctx = Ctx {
        a,
        n,
        d,
        memo: HashMap::new(),
        cap: cache_capacity,
    };
    let full = (1u32 << n) - 1;
    let mut sets = vec![full; d - 1];
    Ok(expand(&mut ctx, &mut sets, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use crate::tensor::tests::{t, tensor_b};

    fn i3() -> Tensor {
        Tensor::identity(3, 3)
    }

    fn j3() -> Tensor {
        Tensor::ones(3, 3)
    }

    #[test]
    fn per1_paper_values() {
        assert_eq!(per1(&i3()).unwrap(), int(1));
        assert_eq!(per1(&j3()).unwrap(), int(36));
        assert_eq!(per1(&tensor_b()).unwrap(), int(0));
    }

    #[test]
    fn per1_rejects_vectors_and_zeroes_tall_shapes() {
        assert!(per1(&t(&[3], &[1, 2, 3])).is_err());
        // n_1 > n_2 forces 0
        assert_eq!(per1(&t(&[3, 2], &[1, 1, 1, 1, 1, 1])).unwrap(), int(0));
    }

    #[test]
    fn per1_matches_matrix_permanent() {
        let m = t(&[3, 3], &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        // 1*5*9 + 1*6*8 + 2*4*9 + 2*6*7 + 3*4*8 + 3*5*7
        assert_eq!(per1(&m).unwrap(), int(45 + 48 + 72 + 84 + 96 + 105));
    }

    #[test]
    fn per1_min_examples() {
        // 2x1 column (a,b) sums the column
        assert_eq!(per1_min(&t(&[2, 1], &[4, 9])).unwrap(), int(13));
        // transpose-invariant on rectangles
        let m = t(&[2, 3], &[1, 2, 3, 4, 5, 6]);
        let mt = m.sigma_transpose(&[2, 1]).unwrap();
        assert_eq!(per1_min(&m).unwrap(), per1_min(&mt).unwrap());
        assert_eq!(per1_min(&m).unwrap(), per1(&m).unwrap());
        // cubical reduces to per1
        assert_eq!(per1_min(&j3()).unwrap(), int(36));
    }

    #[test]
    fn symmetric_form_agrees() {
        assert_eq!(per_symmetric(&i3()).unwrap(), int(1));
        assert_eq!(per_symmetric(&j3()).unwrap(), int(36));
        // J_n of order d evaluates to (n!)^(d-1)
        assert_eq!(per_symmetric(&Tensor::ones(2, 4)).unwrap(), int(8));
        assert_eq!(per_symmetric(&Tensor::ones(3, 2)).unwrap(), int(6));
        let m = t(&[3, 3], &[2, 0, 1, 1, 3, 5, 0, 1, 2]);
        assert_eq!(per_symmetric(&m).unwrap(), per1(&m).unwrap());
    }

    #[test]
    fn hamming_form_agrees() {
        assert_eq!(per_hamming(&tensor_b()).unwrap(), int(0));
        assert_eq!(per_hamming(&j3()).unwrap(), int(36));
        assert_eq!(
            per_hamming(&Tensor::zeros(vec![2, 2, 2]).unwrap()).unwrap(),
            int(0)
        );
        // 2x2x2x2 reproduces the 8-term expansion; all-ones gives 8
        assert_eq!(per_hamming(&Tensor::ones(2, 4)).unwrap(), int(8));
    }

    #[test]
    fn per2_paper_values() {
        assert_eq!(per2_3d(&i3()).unwrap(), int(0));
        assert_eq!(per2_3d(&j3()).unwrap(), int(12));
        assert_eq!(per2_3d(&tensor_b()).unwrap(), int(1));
        assert!(per2_3d(&Tensor::ones(2, 4)).is_err());
    }

    #[test]
    fn per2_generic_expansion() {
        // a111 a221 a122 a212 + a211 a121 a112 a222 with distinct primes
        let a = t(&[2, 2, 2], &[2, 3, 5, 7, 11, 13, 17, 19]);
        // cells: (1,1,1)=2 (1,1,2)=3 (1,2,1)=5 (1,2,2)=7 (2,1,1)=11 (2,1,2)=13 (2,2,1)=17 (2,2,2)=19
        let expect = int(2 * 17 * 7 * 13) + int(11 * 5 * 3 * 19);
        assert_eq!(per2_3d(&a).unwrap(), expect);
    }

    #[test]
    fn kper_examples() {
        assert_eq!(kper(&i3(), 1).unwrap(), int(1));
        assert_eq!(kper(&i3(), 2).unwrap(), int(0));
        assert_eq!(kper(&j3(), 2).unwrap(), int(12));
        assert_eq!(kper(&Tensor::ones(2, 4), 2).unwrap(), int(0));
        assert!(kper(&j3(), 3).is_err());
        assert!(kper(&j3(), 0).is_err());
    }

    #[test]
    fn laplace_agrees() {
        assert_eq!(per_laplace(&i3()).unwrap(), int(1));
        assert_eq!(per_laplace(&j3()).unwrap(), int(36));
        assert_eq!(per_laplace(&t(&[1, 1], &[7])).unwrap(), int(7));
        let m = t(&[3, 3], &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        assert_eq!(per_laplace(&m).unwrap(), per1(&m).unwrap());
        assert_eq!(
            per_laplace_with_cache(&m, Some(2)).unwrap(),
            per1(&m).unwrap()
        );
    }

    #[test]
    fn routes_agree_on_random_rationals() {
        let mut seed = 37u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 7) as i64 - 2
        };
        for _ in 0..10 {
            let vals: Vec<Rational> = (0..27).map(|_| ratio(next(), 3)).collect();
            let a = Tensor::new(vec![3, 3, 3], vals).unwrap();
            let p = per1(&a).unwrap();
            assert_eq!(per_symmetric(&a).unwrap(), p);
            assert_eq!(per_hamming(&a).unwrap(), p);
            assert_eq!(per_laplace(&a).unwrap(), p);
            assert_eq!(kper(&a, 1).unwrap(), p);
            assert_eq!(kper(&a, 2).unwrap(), per2_3d(&a).unwrap());
        }
    }
}
