//! Phase-1 simplex over exact rationals with Bland's anti-cycling rule.

use num_traits::{Signed, Zero};

use crate::scalar::Rational;

/// Finds x >= 0 with A x = b, or None when infeasible. Dense tableau,
/// artificial variable per row, Bland pivoting throughout.
pub fn nonnegative_solution(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    if rows == 0 {
        return Some(Vec::new());
    }
    let vars = a[0].len();

    // tableau rows: [structural | artificial | rhs], rhs kept nonnegative
    let total = vars + rows;
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), vars);
        let flip = b[i].is_negative();
        let mut t: Vec<Rational> = Vec::with_capacity(total + 1);
        for x in row {
            t.push(if flip { -x.clone() } else { x.clone() });
        }
        for j in 0..rows {
            t.push(if i == j {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            });
        }
        t.push(if flip { -b[i].clone() } else { b[i].clone() });
        tab.push(t);
    }
    let mut basis: Vec<usize> = (vars..total).collect();

    // reduced costs for minimizing the artificial sum
    let mut obj: Vec<Rational> = vec![Rational::zero(); total + 1];
    for j in 0..=total {
        let mut s = Rational::zero();
        for row in &tab {
            s += &row[j];
        }
        let cost_j = if (vars..total).contains(&j) {
            Rational::from_integer(1.into())
        } else {
            Rational::zero()
        };
        obj[j] = cost_j - s;
    }

    loop {
        // Bland: entering = lowest-index column with negative reduced cost
        let Some(enter) = (0..total).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // ratio test, ties broken by lowest basis variable index
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[total] / &row[enter];
                let better = match &best {
                    None => true,
                    Some(cur) => {
                        ratio < *cur || (ratio == *cur && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave?; // unbounded cannot happen with artificial phase 1
        pivot(&mut tab, &mut obj, &mut basis, leave, enter, total);
    }

    // objective value = -obj[total] after the updates; feasible iff zero
    if !obj[total].is_zero() {
        return None;
    }

    // pivot any basic artificial out on a structural column when possible
    for i in 0..rows {
        if basis[i] >= vars {
            if let Some(enter) = (0..vars).find(|&j| !tab[i][j].is_zero()) {
                pivot(&mut tab, &mut obj, &mut basis, i, enter, total);
            }
        }
    }

    let mut x = vec![Rational::zero(); vars];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < vars {
            x[bj] = tab[i][total].clone();
        } else {
            debug_assert!(tab[i][total].is_zero());
        }
    }
    Some(x)
}

fn pivot(
    tab: &mut [Vec<Rational>],
    obj: &mut [Rational],
    basis: &mut [usize],
    leave: usize,
    enter: usize,
    total: usize,
) {
    let inv = tab[leave][enter].clone();
    for x in &mut tab[leave] {
        *x /= &inv;
    }
    for i in 0..tab.len() {
        if i != leave && !tab[i][enter].is_zero() {
            let f = tab[i][enter].clone();
            for j in 0..=total {
                let delta = &tab[leave][j] * &f;
                tab[i][j] -= delta;
            }
        }
    }
    if !obj[enter].is_zero() {
        let f = obj[enter].clone();
        for j in 0..=total {
            let delta = &tab[leave][j] * &f;
            obj[j] -= delta;
        }
    }
    basis[leave] = enter;
}
