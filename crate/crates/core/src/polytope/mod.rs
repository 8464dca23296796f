//! Stochasticity predicates, permutation-tensor structure, and exact vertex
//! enumeration for the polytopes of line- and plane-stochastic tensors.

pub mod dd;
pub mod linalg;
pub mod simplex;

use num_traits::{One, Signed, Zero};

use crate::combinat::{diagonal_patterns, hamming_perm, Permutation};
use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::tensor::{IndexIter, Tensor};

/// Which family of k-planes must sum to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StochKind {
    /// 1-planes (lines); k = 1.
    Line,
    /// 2-planes; k = 2.
    Plane,
}

impl StochKind {
    pub fn level(self) -> usize {
        match self {
            StochKind::Line => 1,
            StochKind::Plane => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StochKind::Line => "line",
            StochKind::Plane => "plane",
        }
    }
}

/// Equality system M x = 1, x >= 0 over the n^d cells of a cubical tensor,
/// one row per k-plane.
#[derive(Clone, Debug)]
pub struct PolytopeSpec {
    n: usize,
    d: usize,
    k: usize,
}

impl PolytopeSpec {
    pub fn new(d: usize, n: usize, kind: StochKind) -> Result<PolytopeSpec> {
        let k = kind.level();
        if n == 0 {
            return Err(Error::ZeroExtent);
        }
        if d < 2 || k >= d {
            return Err(Error::BadOrder {
                got: d,
                need: "order > k >= 1",
            });
        }
        Ok(PolytopeSpec { n, d, k })
    }

    /// Line-stochastic order-3 tensors of dimension n.
    pub fn line(n: usize) -> PolytopeSpec {
        PolytopeSpec { n, d: 3, k: 1 }
    }

    /// Plane-stochastic order-3 tensors of dimension n.
    pub fn plane(n: usize) -> PolytopeSpec {
        PolytopeSpec { n, d: 3, k: 2 }
    }

    /// Doubly stochastic matrices (the Birkhoff baseline).
    pub fn doubly_stochastic(n: usize) -> PolytopeSpec {
        PolytopeSpec { n, d: 2, k: 1 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> usize {
        self.k
    }

    pub fn kind_name(&self) -> &'static str {
        match self.k {
            1 => "line",
            2 => "plane",
            _ => "k",
        }
    }

    fn cell_count(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    /// 0/1 indicator rows of every k-plane, duplicates removed; rhs is all 1s.
    pub fn constraint_rows(&self) -> Vec<Vec<Rational>> {
        let cells = self.cell_count();
        let scratch = Tensor::zeros(vec![self.n; self.d]).expect("positive dims");
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for fixed_axes in k_subsets_1based(self.d, self.d - self.k) {
            let vals_dims = vec![self.n; fixed_axes.len()];
            for vals in IndexIter::new(vals_dims) {
                let mut indicator = vec![false; cells];
                let free_axes: Vec<usize> = (1..=self.d)
                    .filter(|a| !fixed_axes.contains(a))
                    .collect();
                let mut idx = vec![0usize; self.d];
                for (&a, &v) in fixed_axes.iter().zip(vals.coords()) {
                    idx[a - 1] = v;
                }
                for free in IndexIter::new(vec![self.n; free_axes.len()]) {
                    for (&a, &v) in free_axes.iter().zip(free.coords()) {
                        idx[a - 1] = v;
                    }
                    indicator[scratch.offset(&idx)] = true;
                }
                if seen.insert(indicator.clone()) {
                    rows.push(
                        indicator
                            .iter()
                            .map(|&b| if b { Rational::one() } else { Rational::zero() })
                            .collect(),
                    );
                }
            }
        }
        rows
    }

    /// Exact membership: matching shape, nonnegative, every k-plane sums to 1.
    pub fn contains(&self, t: &Tensor) -> Result<bool> {
        if t.dims() != vec![self.n; self.d].as_slice() {
            return Err(Error::ShapeMismatch(
                t.dims().to_vec(),
                vec![self.n; self.d],
            ));
        }
        if t.first_negative().is_some() {
            return Ok(false);
        }
        is_k_stochastic(t, self.k)
    }
}

fn k_subsets_1based(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in start..=d {
            cur.push(a);
            rec(a + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, d, k, &mut Vec::new(), &mut out);
    out
}

/// True iff every k-plane of the cubical nonnegative tensor sums to exactly 1.
/// Negative entries are an error, distinct from a plain sum failure.
pub fn is_k_stochastic(t: &Tensor, k: usize) -> Result<bool> {
    let n = t.cubical_dim()?;
    let d = t.order();
    if k < 1 || k > d {
        return Err(Error::LevelOutOfRange { k, order: d });
    }
    if let Some(idx) = t.first_negative() {
        return Err(Error::NegativeEntry(idx.coords().to_vec()));
    }
    for fixed_axes in k_subsets_1based(d, d - k) {
        for vals in IndexIter::new(vec![n; fixed_axes.len()]) {
            let free_axes: Vec<usize> = (1..=d).filter(|a| !fixed_axes.contains(a)).collect();
            let mut idx = vec![0usize; d];
            for (&a, &v) in fixed_axes.iter().zip(vals.coords()) {
                idx[a - 1] = v;
            }
            let mut sum = Rational::zero();
            for free in IndexIter::new(vec![n; free_axes.len()]) {
                for (&a, &v) in free_axes.iter().zip(free.coords()) {
                    idx[a - 1] = v;
                }
                sum += t.get(&idx);
            }
            if !sum.is_one() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A k-permutation tensor is a k-stochastic (0,1)-tensor.
pub fn is_k_permutation(t: &Tensor, k: usize) -> Result<bool> {
    t.cubical_dim()?;
    if !t.is_zero_one() {
        return Ok(false);
    }
    is_k_stochastic(t, k)
}

/// All k-permutation tensors of order d and dimension n, in pattern-stream
/// order. Their supports are exactly the level-(d-k) index patterns.
pub fn k_permutation_tensors(d: usize, n: usize, k: usize) -> Result<Vec<Tensor>> {
    if k < 1 || k >= d {
        return Err(Error::LevelOutOfRange { k, order: d });
    }
    diagonal_patterns(d, n, d - k)?
        .map(|p| p.map(|pat| pat.to_tensor()))
        .collect()
}

/// Order-3 line-permutation tensors (Latin-square stacks); there are L_n.
pub fn line_permutation_tensors(n: usize) -> Result<Vec<Tensor>> {
    k_permutation_tensors(3, n, 1)
}

/// Order-3 plane-permutation tensors (diagonal supports); there are (n!)^2.
pub fn plane_permutation_tensors(n: usize) -> Result<Vec<Tensor>> {
    k_permutation_tensors(3, n, 2)
}

/// The four equivalent ways to say n permutation matrices stack into a
/// line-permutation tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinePermReport {
    pub stacked_is_line_permutation: bool,
    pub pairwise_disjoint: bool,
    pub pairwise_distance_n: bool,
    pub sum_is_all_ones: bool,
}

impl LinePermReport {
    pub fn all(&self) -> bool {
        self.stacked_is_line_permutation
            && self.pairwise_disjoint
            && self.pairwise_distance_n
            && self.sum_is_all_ones
    }

    pub fn agree(&self) -> bool {
        let v = self.stacked_is_line_permutation;
        v == self.pairwise_disjoint && v == self.pairwise_distance_n && v == self.sum_is_all_ones
    }
}

/// Evaluates the four conditions independently and asserts they agree.
pub fn check_line_perm_equivalences(mats: &[Tensor]) -> Result<LinePermReport> {
    let n = match mats.first() {
        Some(m) => m.dims()[0],
        None => return Err(Error::ZeroExtent),
    };
    if mats.len() != n {
        return Err(Error::LengthMismatch(mats.len(), n));
    }
    let perms: Vec<Permutation> = mats
        .iter()
        .map(Permutation::from_matrix)
        .collect::<Result<_>>()?;

    // (1) stack slices: entry (i, j, s) = P_s[i, j]
    let mut stacked = Tensor::zeros(vec![n, n, n])?;
    for (s0, m) in mats.iter().enumerate() {
        for i in 1..=n {
            for j in 1..=n {
                stacked.set(&[i, j, s0 + 1], m.get(&[i, j]).clone());
            }
        }
    }
    let stacked_is_line_permutation = is_k_permutation(&stacked, 1)?;

    // (2) Hadamard-orthogonal pairs
    let mut pairwise_disjoint = true;
    'pairs: for a in 0..n {
        for b in a + 1..n {
            let prod = mats[a].hadamard(&mats[b])?;
            if !prod.entries().iter().all(|e| e.is_zero()) {
                pairwise_disjoint = false;
                break 'pairs;
            }
        }
    }

    // (3) pairwise Hamming distance n
    let mut pairwise_distance_n = true;
    'dist: for a in 0..n {
        for b in a + 1..n {
            if hamming_perm(&perms[a], &perms[b])? != n {
                pairwise_distance_n = false;
                break 'dist;
            }
        }
    }

    // (4) sum of the matrices is the all-ones matrix
    let mut sum = Tensor::zeros(vec![n, n])?;
    for m in mats {
        sum = sum.add(m)?;
    }
    let sum_is_all_ones = sum == Tensor::ones(n, 2);

    let report = LinePermReport {
        stacked_is_line_permutation,
        pairwise_disjoint,
        pairwise_distance_n,
        sum_is_all_ones,
    };
    assert!(report.agree(), "equivalent conditions diverged: {report:?}");
    Ok(report)
}

/// True iff all three plus-projections of the (0,1) order-3 tensor are
/// permutation matrices; equivalent to being a plane-permutation tensor.
pub fn check_plane_perm_projections(r: &Tensor) -> Result<bool> {
    r.cubical_dim()?;
    if r.order() != 3 {
        return Err(Error::BadOrder {
            got: r.order(),
            need: "3",
        });
    }
    if !r.is_zero_one() {
        return Err(Error::NotZeroOne);
    }
    let mut all_perm = true;
    for axis in 1..=3 {
        let proj = r.plus_projection(axis)?;
        if Permutation::from_matrix(&proj).is_err() {
            all_perm = false;
            break;
        }
    }
    let direct = is_k_permutation(r, 2)?;
    assert_eq!(
        all_perm, direct,
        "projection test must match the 2-stochastic definition"
    );
    Ok(all_perm)
}

/// The two witness tensors: C (plane-stochastic, outside the plane-permutation
/// hull) and D (line-stochastic extreme point with vanishing 2-permanent).
pub fn builtin_tensor(name: &str) -> Result<Tensor> {
    let half = Rational::new(1.into(), 2.into());
    match name {
        "C" => {
            let mut c = Tensor::zeros(vec![2, 2, 2])?;
            for cell in [[2, 1, 1], [1, 2, 1], [1, 1, 2], [2, 2, 2]] {
                c.set(&cell, half.clone());
            }
            Ok(c)
        }
        "D" => {
            let vals: [i64; 27] = [
                0, 1, 1, 1, 1, 0, 1, 0, 1, //
                1, 0, 1, 1, 1, 0, 0, 1, 1, //
                1, 1, 0, 0, 0, 2, 1, 1, 0,
            ];
            let entries = vals
                .iter()
                .map(|&v| Rational::from_integer(v.into()) * &half)
                .collect();
            Tensor::new(vec![3, 3, 3], entries)
        }
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

/// Exact vertex list of a stochastic-tensor polytope.
#[derive(Clone, Debug)]
pub struct VertexSet {
    vertices: Vec<Tensor>,
    zero_one: usize,
}

impl VertexSet {
    pub fn vertices(&self) -> &[Tensor] {
        &self.vertices
    }

    pub fn total(&self) -> usize {
        self.vertices.len()
    }

    pub fn zero_one_count(&self) -> usize {
        self.zero_one
    }

    pub fn non_zero_one_count(&self) -> usize {
        self.vertices.len() - self.zero_one
    }
}

/// Enumerates the polytope's vertices exactly: solve the equality system,
/// run double description on the reduced nonnegativity system, lift back,
/// deduplicate, and verify every vertex by the tight-constraint rank test.
pub fn enumerate_vertices(spec: &PolytopeSpec) -> Result<VertexSet> {
    let rows = spec.constraint_rows();
    let cells = spec.cell_count();
    let b = vec![Rational::one(); rows.len()];
    let Some((x0, basis)) = linalg::solve_affine(&rows, &b) else {
        return Err(Error::Precondition("infeasible stochastic system".into()));
    };
    let reduced_dim = basis.len();

    // homogenized cone over z = (t, y): x = x0 t + basis y >= 0, t >= 0
    let mut cone: Vec<Vec<Rational>> = Vec::with_capacity(cells + 1);
    for c in 0..cells {
        let mut row = Vec::with_capacity(reduced_dim + 1);
        row.push(x0[c].clone());
        for v in &basis {
            row.push(v[c].clone());
        }
        cone.push(row);
    }
    let mut t_row = vec![Rational::zero(); reduced_dim + 1];
    t_row[0] = Rational::one();
    cone.push(t_row);

    let rays = dd::extreme_rays(&cone)?;
    let mut vertices: Vec<Tensor> = Vec::with_capacity(rays.len());
    for ray in rays {
        if !ray[0].is_positive() {
            return Err(Error::UnboundedPolytope);
        }
        let mut x = x0.clone();
        for (j, v) in basis.iter().enumerate() {
            let w = &ray[j + 1] / &ray[0];
            if w.is_zero() {
                continue;
            }
            for (slot, coef) in x.iter_mut().zip(v) {
                *slot += coef * &w;
            }
        }
        vertices.push(Tensor::new(vec![spec.n; spec.d], x)?);
    }
    vertices.sort_by(|a, b| a.entries().cmp(b.entries()));
    vertices.dedup();

    for v in &vertices {
        if !spec.contains(v)? || !is_extreme(v, spec)? {
            return Err(Error::Precondition(
                "enumeration produced a non-vertex; double description invariant broken".into(),
            ));
        }
    }
    let zero_one = vertices.iter().filter(|v| v.is_zero_one()).count();
    Ok(VertexSet { vertices, zero_one })
}

/// Tight-constraint rank test: A is extreme iff the k-plane equalities plus
/// the indicators of A's zero cells pin down all n^d coordinates.
pub fn is_extreme(t: &Tensor, spec: &PolytopeSpec) -> Result<bool> {
    if !spec.contains(t)? {
        return Err(Error::NotInPolytope);
    }
    let cells = spec.cell_count();
    let mut rows = spec.constraint_rows();
    for (off, e) in t.entries().iter().enumerate() {
        if e.is_zero() {
            let mut row = vec![Rational::zero(); cells];
            row[off] = Rational::one();
            rows.push(row);
        }
    }
    Ok(linalg::rank(&rows) == cells)
}

/// Exact convex-hull membership: weights lambda >= 0 with
/// sum lambda_i G_i = target and sum lambda_i = 1, or None.
pub fn in_convex_hull(target: &Tensor, generators: &[Tensor]) -> Result<Option<Vec<Rational>>> {
    if generators.is_empty() {
        return Ok(None);
    }
    for g in generators {
        if g.dims() != target.dims() {
            return Err(Error::ShapeMismatch(g.dims().to_vec(), target.dims().to_vec()));
        }
    }
    let cells = target.len();
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(cells + 1);
    for c in 0..cells {
        a.push(generators.iter().map(|g| g.entries()[c].clone()).collect());
    }
    a.push(vec![Rational::one(); generators.len()]);
    let mut b: Vec<Rational> = target.entries().to_vec();
    b.push(Rational::one());
    Ok(simplex::nonnegative_solution(&a, &b))
}
