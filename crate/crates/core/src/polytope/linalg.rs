//! Dense exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::scalar::Rational;

pub type Row = Vec<Rational>;

/// Reduced row echelon form, in place; returns the pivot column per row.
pub fn rref(m: &mut Vec<Row>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for x in &mut m[r] {
            *x /= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let delta = &m[r][j] * &f;
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(m: &[Row]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

/// Solves M x = b; returns a particular solution and a nullspace basis, or
/// None when the system is inconsistent.
pub fn solve_affine(m: &[Row], b: &[Rational]) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    assert_eq!(m.len(), b.len());
    if m.is_empty() {
        return None;
    }
    let cols = m[0].len();
    let mut aug: Vec<Row> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None; // pivot in the augmented column
    }
    let mut particular = vec![Rational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug[row][cols].clone();
    }
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -aug[row][free].clone();
        }
        basis.push(v);
    }
    Some((particular, basis))
}

/// Exact inverse of a square matrix; None when singular.
pub fn invert(m: &[Row]) -> Option<Vec<Row>> {
    let n = m.len();
    let mut aug: Vec<Row> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                });
            }
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Row> {
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }

    #[test]
    fn rank_and_rref() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn solve_with_nullspace() {
        // x + y + z = 3 with one equation: 2-dim nullspace
        let (x0, basis) = solve_affine(&m(&[&[1, 1, 1]]), &[int(3)]).unwrap();
        assert_eq!(dot(&[int(1), int(1), int(1)], &x0), int(3));
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert_eq!(dot(&[int(1), int(1), int(1)], v), int(0));
        }
        // inconsistent
        assert!(solve_affine(&m(&[&[1, 1], &[1, 1]]), &[int(1), int(2)]).is_none());
    }

    #[test]
    fn invert_small() {
        let inv = invert(&m(&[&[2, 0], &[1, 1]])).unwrap();
        assert_eq!(inv[0], vec![ratio(1, 2), int(0)]);
        assert_eq!(inv[1], vec![ratio(-1, 2), int(1)]);
        assert!(invert(&m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
