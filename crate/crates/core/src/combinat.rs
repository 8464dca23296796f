//! Enumeration machinery: permutations, injections, Hamming distance,
//! pairwise-discordant permutation tuples (Latin squares), and k-per index
//! patterns.
//!
//! Streams are deterministic: every generator yields in lexicographic order
//! of the flattened image lists, and two runs produce identical sequences.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::tensor::{MultiIndex, Tensor};

/// Default ceiling on visited search nodes for exhaustive enumerations.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Largest n for which Latin-square enumeration is allowed by default.
pub const DEFAULT_MAX_LATIN_N: usize = 5;

/// A permutation of 1..=n stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v < 1 || v > n || seen[v - 1] {
                return Err(Error::NotPermutation(n));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of a 1-based point.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n());
        Permutation {
            images: self.images.iter().map(|&v| other.image(v)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i0, &v) in self.images.iter().enumerate() {
            images[v - 1] = i0 + 1;
        }
        Permutation { images }
    }

    /// +1 for even permutations, -1 for odd.
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.n()];
        let mut sign = 1;
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut at = start;
            while !seen[at] {
                seen[at] = true;
                at = self.images[at] - 1;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    pub fn sign_rational(&self) -> Rational {
        if self.sign() == 1 {
            Rational::one()
        } else {
            -Rational::one()
        }
    }

    /// n x n permutation matrix with a 1 at (i, image(i)).
    pub fn to_matrix(&self) -> Tensor {
        let n = self.n();
        let mut m = Tensor::zeros(vec![n, n]).expect("n >= 1");
        for i in 1..=n {
            m.set(&[i, self.image(i)], Rational::one());
        }
        m
    }

    /// Reads a (0,1) permutation matrix back into image form.
    pub fn from_matrix(m: &Tensor) -> Result<Permutation> {
        if m.order() != 2 || !m.is_cubical() {
            return Err(Error::NotPermutationMatrix);
        }
        let n = m.dims()[0];
        let mut images = Vec::with_capacity(n);
        for i in 1..=n {
            let mut hit = None;
            for j in 1..=n {
                let e = m.get(&[i, j]);
                if e.is_one() {
                    if hit.replace(j).is_some() {
                        return Err(Error::NotPermutationMatrix);
                    }
                } else if !e.is_zero() {
                    return Err(Error::NotPermutationMatrix);
                }
            }
            images.push(hit.ok_or(Error::NotPermutationMatrix)?);
        }
        Permutation::from_images(images).map_err(|_| Error::NotPermutationMatrix)
    }
}

/// Count of positions where two equal-length sequences differ.
pub fn hamming<T: PartialEq>(x: &[T], y: &[T]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    Ok(x.iter().zip(y).filter(|(a, b)| a != b).count())
}

pub fn hamming_perm(x: &Permutation, y: &Permutation) -> Result<usize> {
    hamming(x.images(), y.images())
}

/// A one-to-one map from 1..=n into 1..=m given by its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Injection {
    images: Vec<usize>,
    codomain: usize,
}

impl Injection {
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }
}

/// All injections [n] -> [m] in lexicographic image order; empty when n > m.
pub fn injections(n: usize, m: usize) -> Injections {
    Injections::new(n, m)
}

pub struct Injections {
    n: usize,
    m: usize,
    used: Vec<bool>,
    current: Vec<usize>,
    started: bool,
    done: bool,
}

impl Injections {
    fn new(n: usize, m: usize) -> Injections {
        Injections {
            n,
            m,
            used: vec![false; m],
            current: Vec::with_capacity(n),
            started: false,
            done: n > m || n == 0,
        }
    }

    fn fill_smallest(&mut self) {
        while self.current.len() < self.n {
            let v = (1..=self.m).find(|&v| !self.used[v - 1]).expect("n <= m");
            self.used[v - 1] = true;
            self.current.push(v);
        }
    }

    fn advance(&mut self) -> bool {
        while let Some(last) = self.current.pop() {
            self.used[last - 1] = false;
            if let Some(next) = (last + 1..=self.m).find(|&v| !self.used[v - 1]) {
                self.used[next - 1] = true;
                self.current.push(next);
                self.fill_smallest();
                return true;
            }
        }
        false
    }
}

impl Iterator for Injections {
    type Item = Injection;

    fn next(&mut self) -> Option<Injection> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill_smallest();
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(Injection {
            images: self.current.clone(),
            codomain: self.m,
        })
    }
}

/// All permutations of 1..=n in lexicographic order (identity first).
pub fn permutations(n: usize) -> impl Iterator<Item = Permutation> {
    injections(n, n).map(|inj| Permutation {
        images: inj.images,
    })
}

/// Tuple of permutations of [n]; generators guarantee pairwise Hamming distance n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermTuple {
    perms: Vec<Permutation>,
}

impl PermTuple {
    pub fn new(perms: Vec<Permutation>) -> PermTuple {
        PermTuple { perms }
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    /// Checks the pairwise-distance-n flag directly from the definition.
    pub fn is_pairwise_distance_n(&self) -> bool {
        let n = match self.perms.first() {
            Some(p) => p.n(),
            None => return true,
        };
        for a in 0..self.perms.len() {
            for b in a + 1..self.perms.len() {
                match hamming_perm(&self.perms[a], &self.perms[b]) {
                    Ok(d) if d == n => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Latin-square rows: row i lists pi_i(1..n).
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.perms.iter().map(|p| p.images().to_vec()).collect()
    }

    /// Stacks an n-tuple into the n x n x n tensor with slice i labeled pi_i:
    /// entry (j, pi_i(j), i) = 1.
    pub fn to_slice_tensor(&self) -> Result<Tensor> {
        let m = self.perms.len();
        let n = self
            .perms
            .first()
            .map(|p| p.n())
            .ok_or(Error::ZeroExtent)?;
        if m != n {
            return Err(Error::LengthMismatch(m, n));
        }
        let mut t = Tensor::zeros(vec![n, n, n])?;
        for (i0, p) in self.perms.iter().enumerate() {
            for j in 1..=n {
                t.set(&[j, p.image(j), i0 + 1], Rational::one());
            }
        }
        Ok(t)
    }
}

/// All m-tuples of permutations of [n] with pairwise Hamming distance n,
/// in lexicographic order of the concatenated image lists.
pub fn perm_tuples_distance_n(n: usize, m: usize) -> PermTuples {
    PermTuples::new(n, m, DEFAULT_NODE_BUDGET, Vec::new())
}

pub fn perm_tuples_distance_n_with_budget(n: usize, m: usize, budget: u64) -> PermTuples {
    PermTuples::new(n, m, budget, Vec::new())
}

/// Backtracking search over the m x n table M[s][p] = pi_s(p), filled
/// row-major; row-distinctness makes each row a permutation and
/// column-distinctness enforces the pairwise distance.
pub struct PermTuples {
    n: usize,
    m: usize,
    cells: Vec<usize>,
    row_used: Vec<Vec<bool>>,
    col_used: Vec<Vec<bool>>,
    fixed: Vec<Option<usize>>,
    resume_from: usize,
    visited: u64,
    budget: u64,
    done: bool,
}

impl PermTuples {
    fn new(n: usize, m: usize, budget: u64, fixed: Vec<Option<usize>>) -> PermTuples {
        let total = n * m;
        let fixed = if fixed.is_empty() {
            vec![None; total]
        } else {
            fixed
        };
        PermTuples {
            n,
            m,
            cells: Vec::with_capacity(total),
            row_used: vec![vec![false; n]; m],
            col_used: vec![vec![false; n]; n],
            fixed,
            resume_from: 1,
            visited: 0,
            budget,
            done: n == 0 || m == 0,
        }
    }

    fn candidate_ok(&self, t: usize, v: usize) -> bool {
        let row = t / self.n;
        let pos = t % self.n;
        if let Some(f) = self.fixed[t] {
            if f != v {
                return false;
            }
        }
        !self.row_used[row][v - 1] && !self.col_used[pos][v - 1]
    }

    fn place(&mut self, t: usize, v: usize) {
        let row = t / self.n;
        let pos = t % self.n;
        self.row_used[row][v - 1] = true;
        self.col_used[pos][v - 1] = true;
        self.cells.push(v);
    }

    fn unplace(&mut self) -> usize {
        let v = self.cells.pop().expect("non-empty");
        let t = self.cells.len();
        let row = t / self.n;
        let pos = t % self.n;
        self.row_used[row][v - 1] = false;
        self.col_used[pos][v - 1] = false;
        v
    }

    fn build_tuple(&self) -> PermTuple {
        let perms = self
            .cells
            .chunks(self.n)
            .map(|chunk| Permutation {
                images: chunk.to_vec(),
            })
            .collect();
        PermTuple { perms }
    }
}

impl Iterator for PermTuples {
    type Item = Result<PermTuple>;

    fn next(&mut self) -> Option<Result<PermTuple>> {
        if self.done {
            return None;
        }
        let total = self.n * self.m;
        // After yielding a full solution, back off its last cell.
        if self.cells.len() == total {
            self.resume_from = self.unplace() + 1;
        }
        loop {
            let t = self.cells.len();
            let mut placed = false;
            for v in self.resume_from..=self.n {
                if self.candidate_ok(t, v) {
                    self.visited += 1;
                    if self.visited > self.budget {
                        self.done = true;
                        return Some(Err(Error::ResourceGuard {
                            visited: self.visited,
                            budget: self.budget,
                        }));
                    }
                    self.place(t, v);
                    placed = true;
                    break;
                }
            }
            if placed {
                self.resume_from = 1;
                if self.cells.len() == total {
                    return Some(Ok(self.build_tuple()));
                }
            } else {
                if self.cells.is_empty() {
                    self.done = true;
                    return None;
                }
                self.resume_from = self.unplace() + 1;
            }
        }
    }
}

/// Latin squares of order n, one per distance-n tuple of its rows.
pub fn latin_squares(n: usize) -> PermTuples {
    perm_tuples_distance_n(n, n)
}

pub fn count_latin_squares(n: usize) -> Result<u64> {
    count_latin_squares_with(n, DEFAULT_MAX_LATIN_N, DEFAULT_NODE_BUDGET)
}

/// Counts Latin squares; for n >= 4 the search fixes the first row and column
/// (reduced squares) and multiplies back by n!(n-1)!.
pub fn count_latin_squares_with(n: usize, max_n: usize, budget: u64) -> Result<u64> {
    if n > max_n {
        return Err(Error::DimensionGuard {
            n,
            max: max_n,
            what: "Latin square enumeration",
        });
    }
    if n == 0 {
        return Ok(0);
    }
    if n < 4 {
        let mut count = 0u64;
        for item in perm_tuples_distance_n_with_budget(n, n, budget) {
            item?;
            count += 1;
        }
        return Ok(count);
    }
    let mut fixed = vec![None; n * n];
    for (p, slot) in fixed.iter_mut().take(n).enumerate() {
        *slot = Some(p + 1);
    }
    for s in 0..n {
        fixed[s * n] = Some(s + 1);
    }
    let mut reduced = 0u64;
    for item in PermTuples::new(n, n, budget, fixed) {
        item?;
        reduced += 1;
    }
    let factorial = |v: usize| -> u64 { (1..=v as u64).product() };
    Ok(reduced * factorial(n) * factorial(n - 1))
}

/// A k-per index pattern: n^k cells of an order-d dimension-n tensor, no two
/// sharing a (d-k)-plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagonalPattern {
    order: usize,
    dim: usize,
    level: usize,
    cells: Vec<MultiIndex>,
}

impl DiagonalPattern {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn cells(&self) -> &[MultiIndex] {
        &self.cells
    }

    /// Independent validator: cell-set-wise projection-bijectivity test.
    /// Deliberately ignores how the pattern was produced.
    pub fn validate(&self) -> Result<()> {
        let (d, n, k) = (self.order, self.dim, self.level);
        if k < 1 || k >= d {
            return Err(Error::LevelOutOfRange { k, order: d });
        }
        let want = n.pow(k as u32);
        if self.cells.len() != want {
            return Err(Error::Precondition(format!(
                "pattern has {} cells, expected n^k = {want}",
                self.cells.len()
            )));
        }
        for cell in &self.cells {
            MultiIndex::checked_for(cell.coords().to_vec(), &vec![n; d])?;
        }
        for subset in k_subsets(d, k) {
            let mut seen = std::collections::HashSet::new();
            for cell in &self.cells {
                let proj: Vec<usize> = subset.iter().map(|&a| cell.coords()[a]).collect();
                if !seen.insert(proj) {
                    return Err(Error::Precondition(format!(
                        "two cells share a (d-k)-plane on axes {:?}",
                        subset.iter().map(|a| a + 1).collect::<Vec<_>>()
                    )));
                }
            }
        }
        Ok(())
    }

    /// (0,1)-tensor with 1s exactly at the pattern's cells.
    pub fn to_tensor(&self) -> Tensor {
        let mut t = Tensor::zeros(vec![self.dim; self.order]).expect("positive dims");
        for cell in &self.cells {
            t.set(cell.coords(), Rational::one());
        }
        t
    }

    /// Product of the entries of `a` over the pattern's cells.
    pub fn product_over(&self, a: &Tensor) -> Rational {
        let mut prod = Rational::one();
        for cell in &self.cells {
            let e = a.get(cell.coords());
            if e.is_zero() {
                return Rational::zero();
            }
            prod *= e;
        }
        prod
    }
}

/// 0-based k-subsets of {0..d-1} in lexicographic order.
fn k_subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if cur[pos] < d - k + pos {
                cur[pos] += 1;
                for later in pos + 1..k {
                    cur[later] = cur[later - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return out;
            }
        }
    }
}

/// Every element of P_{d,n,k} exactly once, lexicographic by sorted cell list.
pub fn diagonal_patterns(d: usize, n: usize, k: usize) -> Result<DiagonalPatterns> {
    diagonal_patterns_with_budget(d, n, k, DEFAULT_NODE_BUDGET)
}

pub fn diagonal_patterns_with_budget(
    d: usize,
    n: usize,
    k: usize,
    budget: u64,
) -> Result<DiagonalPatterns> {
    if k < 1 || k >= d {
        return Err(Error::LevelOutOfRange { k, order: d });
    }
    if n == 0 {
        return Err(Error::ZeroExtent);
    }
    Ok(DiagonalPatterns::new(d, n, k, budget))
}

/// Backtracker over cells: the projection onto the first k axes is forced to
/// be a bijection, so cell t carries the t-th prefix in [n]^k and the search
/// only chooses the remaining d-k coordinates.
pub struct DiagonalPatterns {
    d: usize,
    n: usize,
    k: usize,
    prefixes: Vec<Vec<usize>>,
    subsets: Vec<Vec<usize>>,
    /// used[s][code] = some chosen cell projects onto `code` under subset s
    used: Vec<Vec<bool>>,
    suffixes: Vec<usize>,
    resume_from: usize,
    visited: u64,
    budget: u64,
    done: bool,
}

impl DiagonalPatterns {
    fn new(d: usize, n: usize, k: usize, budget: u64) -> DiagonalPatterns {
        let prefixes: Vec<Vec<usize>> = all_codes(n, k);
        let subsets = k_subsets(d, k);
        let used = subsets.iter().map(|_| vec![false; n.pow(k as u32)]).collect();
        DiagonalPatterns {
            d,
            n,
            k,
            prefixes,
            subsets,
            used,
            suffixes: Vec::new(),
            resume_from: 0,
            visited: 0,
            budget,
            done: false,
        }
    }

    fn cell_for(&self, t: usize, suffix_code: usize) -> Vec<usize> {
        let mut cell = self.prefixes[t].clone();
        cell.extend(decode(suffix_code, self.n, self.d - self.k));
        cell
    }

    fn proj_code(&self, cell: &[usize], subset: &[usize]) -> usize {
        let mut code = 0;
        for &axis in subset {
            code = code * self.n + (cell[axis] - 1);
        }
        code
    }

    fn try_place(&mut self, t: usize, suffix_code: usize) -> bool {
        let cell = self.cell_for(t, suffix_code);
        let codes: Vec<usize> = self
            .subsets
            .iter()
            .map(|s| self.proj_code(&cell, s))
            .collect();
        if codes
            .iter()
            .zip(&self.used)
            .any(|(&code, used)| used[code])
        {
            return false;
        }
        for (&code, used) in codes.iter().zip(self.used.iter_mut()) {
            used[code] = true;
        }
        self.suffixes.push(suffix_code);
        true
    }

    fn unplace(&mut self) -> usize {
        let suffix_code = self.suffixes.pop().expect("non-empty");
        let t = self.suffixes.len();
        let cell = self.cell_for(t, suffix_code);
        let codes: Vec<usize> = self
            .subsets
            .iter()
            .map(|s| self.proj_code(&cell, s))
            .collect();
        for (&code, used) in codes.iter().zip(self.used.iter_mut()) {
            used[code] = false;
        }
        suffix_code
    }

    fn build(&self) -> DiagonalPattern {
        let cells = self
            .suffixes
            .iter()
            .enumerate()
            .map(|(t, &code)| MultiIndex::new(self.cell_for(t, code)))
            .collect();
        DiagonalPattern {
            order: self.d,
            dim: self.n,
            level: self.k,
            cells,
        }
    }
}

impl Iterator for DiagonalPatterns {
    type Item = Result<DiagonalPattern>;

    fn next(&mut self) -> Option<Result<DiagonalPattern>> {
        if self.done {
            return None;
        }
        let total = self.prefixes.len();
        let suffix_count = self.n.pow((self.d - self.k) as u32);
        if self.suffixes.len() == total {
            self.resume_from = self.unplace() + 1;
        }
        loop {
            let t = self.suffixes.len();
            let mut placed = false;
            for code in self.resume_from..suffix_count {
                self.visited += 1;
                if self.visited > self.budget {
                    self.done = true;
                    return Some(Err(Error::ResourceGuard {
                        visited: self.visited,
                        budget: self.budget,
                    }));
                }
                if self.try_place(t, code) {
                    placed = true;
                    break;
                }
            }
            if placed {
                self.resume_from = 0;
                if self.suffixes.len() == total {
                    return Some(Ok(self.build()));
                }
            } else {
                if self.suffixes.is_empty() {
                    self.done = true;
                    return None;
                }
                self.resume_from = self.unplace() + 1;
            }
        }
    }
}

/// All length-`len` tuples over 1..=n in lexicographic order.
fn all_codes(n: usize, len: usize) -> Vec<Vec<usize>> {
    (0..n.pow(len as u32)).map(|c| decode(c, n, len)).collect()
}

fn decode(mut code: usize, n: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = code % n + 1;
        code /= n;
    }
    out
}

/// Builds the triagonal pattern (d=3, k=2) encoded by a distance-n tuple:
/// slice i holds 1s at (j, pi_i(j)).
pub fn latin_tuple_to_pattern(tuple: &PermTuple) -> Result<DiagonalPattern> {
    let n = tuple
        .perms()
        .first()
        .map(|p| p.n())
        .ok_or(Error::ZeroExtent)?;
    if tuple.len() != n || !tuple.is_pairwise_distance_n() {
        return Err(Error::Precondition(
            "tuple is not a distance-n n-tuple".into(),
        ));
    }
    let mut cells = Vec::with_capacity(n * n);
    for (i0, p) in tuple.perms().iter().enumerate() {
        for j in 1..=n {
            cells.push(MultiIndex::new(vec![j, p.image(j), i0 + 1]));
        }
    }
    cells.sort();
    Ok(DiagonalPattern {
        order: 3,
        dim: n,
        level: 2,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(&[1, 2, 3], &[1, 3, 2]).unwrap(), 2);
        assert_eq!(hamming(&[1, 2, 3], &[1, 2, 3]).unwrap(), 0);
        assert_eq!(hamming(&[1, 2], &[2, 1]).unwrap(), 2);
        assert!(hamming(&[1, 2], &[1]).is_err());
    }

    #[test]
    fn permutation_streams() {
        assert_eq!(permutations(1).count(), 1);
        assert_eq!(permutations(3).count(), 6);
        let all: Vec<_> = permutations(4).collect();
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], Permutation::identity(4));
        // lexicographic, no repeats
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, all);
    }

    #[test]
    fn injection_streams() {
        assert_eq!(injections(2, 3).count(), 6);
        let perms: Vec<_> = injections(3, 3).map(|i| i.images().to_vec()).collect();
        let direct: Vec<_> = permutations(3).map(|p| p.images().to_vec()).collect();
        assert_eq!(perms, direct);
        assert_eq!(injections(3, 2).count(), 0);
    }

    #[test]
    fn permutation_algebra() {
        let p = Permutation::from_images(vec![2, 3, 1]).unwrap();
        assert_eq!(p.sign(), 1);
        assert_eq!(p.then(&p.inverse()), Permutation::identity(3));
        let swap = Permutation::from_images(vec![2, 1, 3]).unwrap();
        assert_eq!(swap.sign(), -1);
        assert!(Permutation::from_images(vec![1, 1]).is_err());
        assert!(Permutation::from_images(vec![1, 3]).is_err());
        // matrix roundtrip
        assert_eq!(Permutation::from_matrix(&p.to_matrix()).unwrap(), p);
        assert!(Permutation::from_matrix(&Tensor::ones(2, 2)).is_err());
    }

    #[test]
    fn distance_tuples_counts() {
        // derived by brute force over all 8 triples of S_2: no 3 permutations
        // of [2] are pairwise distance 2
        let brute: Vec<_> = permutations(2).collect();
        let mut brute_count = 0;
        for a in &brute {
            for b in &brute {
                for c in &brute {
                    let t = PermTuple::new(vec![a.clone(), b.clone(), c.clone()]);
                    if t.is_pairwise_distance_n() {
                        brute_count += 1;
                    }
                }
            }
        }
        assert_eq!(brute_count, 0);
        assert_eq!(perm_tuples_distance_n(2, 3).count(), 0);

        assert_eq!(perm_tuples_distance_n(2, 2).count(), 2);
        assert_eq!(perm_tuples_distance_n(3, 3).count(), 12);
        // n! * D_n for pairs, checked against brute force for n <= 4
        for n in 1..=4 {
            let fast = perm_tuples_distance_n(n, 2).count();
            let mut brute = 0;
            for a in permutations(n) {
                for b in permutations(n) {
                    if hamming_perm(&a, &b).unwrap() == n {
                        brute += 1;
                    }
                }
            }
            assert_eq!(fast, brute);
        }
        assert_eq!(perm_tuples_distance_n(4, 2).count(), 24 * 9);
    }

    #[test]
    fn tuples_are_valid_and_deterministic() {
        let run1: Vec<_> = perm_tuples_distance_n(3, 3)
            .collect::<Result<Vec<_>>>()
            .unwrap();
        let run2: Vec<_> = perm_tuples_distance_n(3, 3)
            .collect::<Result<Vec<_>>>()
            .unwrap();
        assert_eq!(run1, run2);
        for t in &run1 {
            assert!(t.is_pairwise_distance_n());
        }
        // lexicographic on flattened images
        let flat: Vec<Vec<usize>> = run1
            .iter()
            .map(|t| t.perms().iter().flat_map(|p| p.images().to_vec()).collect())
            .collect();
        let mut sorted = flat.clone();
        sorted.sort();
        assert_eq!(flat, sorted);
    }

    #[test]
    fn latin_counts() {
        assert_eq!(count_latin_squares(1).unwrap(), 1);
        assert_eq!(count_latin_squares(2).unwrap(), 2);
        assert_eq!(count_latin_squares(3).unwrap(), 12);
        // derived: reduced-square shortcut must agree with full enumeration
        assert_eq!(count_latin_squares(4).unwrap(), 576);
        assert_eq!(latin_squares(4).count(), 576);
        assert!(matches!(
            count_latin_squares_with(6, 5, DEFAULT_NODE_BUDGET),
            Err(Error::DimensionGuard { .. })
        ));
    }

    #[test]
    fn budget_guard_fires() {
        let mut stream = perm_tuples_distance_n_with_budget(4, 4, 10);
        let got = stream.find(|r| r.is_err());
        assert!(matches!(got, Some(Err(Error::ResourceGuard { .. }))));
        assert!(stream.next().is_none());
    }

    #[test]
    fn diagonal_pattern_counts() {
        assert_eq!(diagonal_patterns(3, 2, 1).unwrap().count(), 4);
        for n in 1..=4usize {
            let fact: usize = (1..=n).product();
            assert_eq!(diagonal_patterns(3, n, 1).unwrap().count(), fact * fact);
        }
        // no 2-per selection exists in a 2x2x2x2 tensor
        assert_eq!(diagonal_patterns(4, 2, 2).unwrap().count(), 0);
        // triagonals are Latin squares
        for n in 1..=4usize {
            assert_eq!(
                diagonal_patterns(3, n, 2).unwrap().count() as u64,
                count_latin_squares(n).unwrap()
            );
        }
        assert!(diagonal_patterns(3, 2, 0).is_err());
        assert!(diagonal_patterns(3, 2, 3).is_err());
    }

    #[test]
    fn emitted_patterns_pass_independent_validator() {
        for (d, n, k) in [(3, 3, 1), (3, 3, 2), (4, 2, 1), (4, 2, 3), (2, 4, 1)] {
            let mut count = 0;
            for p in diagonal_patterns(d, n, k).unwrap() {
                let p = p.unwrap();
                p.validate().unwrap();
                count += 1;
            }
            assert!(count > 0, "({d},{n},{k}) produced nothing");
        }
    }

    #[test]
    fn pattern_streams_deterministic_and_sorted() {
        let a: Vec<_> = diagonal_patterns(3, 3, 2)
            .unwrap()
            .collect::<Result<Vec<_>>>()
            .unwrap();
        let b: Vec<_> = diagonal_patterns(3, 3, 2)
            .unwrap()
            .collect::<Result<Vec<_>>>()
            .unwrap();
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_by(|x, y| x.cells().cmp(y.cells()));
        assert_eq!(a, sorted);
    }

    #[test]
    fn pattern_to_tensor_examples() {
        // the main diagonal pattern of a 3x3x3 gives the identity tensor
        let diag = diagonal_patterns(3, 3, 1)
            .unwrap()
            .map(|p| p.unwrap())
            .find(|p| {
                p.cells()
                    .iter()
                    .all(|c| c.coords().iter().all(|&x| x == c.coords()[0]))
            })
            .unwrap();
        assert_eq!(diag.to_tensor(), Tensor::identity(3, 3));
        // d=2 k=1 patterns are permutation matrices
        for p in diagonal_patterns(2, 3, 1).unwrap() {
            let m = p.unwrap().to_tensor();
            assert!(Permutation::from_matrix(&m).is_ok());
        }
    }

    #[test]
    fn latin_tuple_pattern_matches_stream() {
        use std::collections::HashSet;
        let via_tuples: HashSet<_> = latin_squares(3)
            .map(|t| latin_tuple_to_pattern(&t.unwrap()).unwrap())
            .collect();
        let via_stream: HashSet<_> = diagonal_patterns(3, 3, 2)
            .unwrap()
            .map(|p| p.unwrap())
            .collect();
        assert_eq!(via_tuples, via_stream);
        let id = Permutation::identity(2);
        assert!(latin_tuple_to_pattern(&PermTuple::new(vec![id.clone(), id])).is_err());
    }
}
