//! Dense tensors over exact rationals.
//!
//! Entries are stored flat in lexicographic order of the (1-based) multi-index
//! with the last index varying fastest. All public indexing is 1-based.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor {
    dims: Vec<usize>,
    entries: Vec<Rational>,
}

/// 1-based multi-index into a tensor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    coords: Vec<usize>,
}

impl MultiIndex {
    pub fn new(coords: Vec<usize>) -> MultiIndex {
        MultiIndex { coords }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn checked_for(coords: Vec<usize>, dims: &[usize]) -> Result<MultiIndex> {
        if coords.len() != dims.len() {
            return Err(Error::LengthMismatch(coords.len(), dims.len()));
        }
        for (axis0, (&c, &n)) in coords.iter().zip(dims).enumerate() {
            if c < 1 || c > n {
                return Err(Error::IndexOutOfRange {
                    axis: axis0 + 1,
                    value: c,
                    extent: n,
                });
            }
        }
        Ok(MultiIndex { coords })
    }
}

/// Fixes some axes to index values; the free axes define a (d-f)-plane.
#[derive(Clone, Debug, Default)]
pub struct PlaneSelector {
    fixed: BTreeMap<usize, usize>,
}

impl PlaneSelector {
    pub fn new() -> PlaneSelector {
        PlaneSelector::default()
    }

    pub fn fix(mut self, axis: usize, value: usize) -> PlaneSelector {
        self.fixed.insert(axis, value);
        self
    }

    pub fn fixed(&self) -> &BTreeMap<usize, usize> {
        &self.fixed
    }
}

impl Tensor {
    pub fn new(dims: Vec<usize>, entries: Vec<Rational>) -> Result<Tensor> {
        if dims.is_empty() || dims.iter().any(|&n| n == 0) {
            return Err(Error::ZeroExtent);
        }
        let expected: usize = dims.iter().product();
        if entries.len() != expected {
            return Err(Error::EntryCountMismatch {
                got: entries.len(),
                expected,
            });
        }
        Ok(Tensor { dims, entries })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Tensor> {
        if dims.is_empty() || dims.iter().any(|&n| n == 0) {
            return Err(Error::ZeroExtent);
        }
        let len = dims.iter().product();
        Ok(Tensor {
            dims,
            entries: vec![Rational::zero(); len],
        })
    }

    /// Identity tensor of order `d` and dimension `n`: 1 at (i,i,...,i), 0 elsewhere.
    pub fn identity(n: usize, d: usize) -> Tensor {
        let mut t = Tensor::zeros(vec![n; d]).expect("positive extents");
        for i in 1..=n {
            let idx = vec![i; d];
            let off = t.offset(&idx);
            t.entries[off] = Rational::one();
        }
        t
    }

    /// All-ones tensor of order `d` and dimension `n`.
    pub fn ones(n: usize, d: usize) -> Tensor {
        let len = n.pow(d as u32);
        Tensor {
            dims: vec![n; d],
            entries: vec![Rational::one(); len],
        }
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_cubical(&self) -> bool {
        self.dims.iter().all(|&n| n == self.dims[0])
    }

    /// Common extent of a cubical tensor.
    pub fn cubical_dim(&self) -> Result<usize> {
        if self.is_cubical() {
            Ok(self.dims[0])
        } else {
            Err(Error::NotCubical)
        }
    }

    pub fn is_zero_one(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero() || e.is_one())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| !e.is_negative())
    }

    /// First index (in lexicographic order) holding a negative entry.
    pub fn first_negative(&self) -> Option<MultiIndex> {
        self.entries
            .iter()
            .position(|e| e.is_negative())
            .map(|off| self.unoffset(off))
    }

    /// Flat offset of a 1-based multi-index; panics on malformed input.
    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut off = 0;
        for (&i, &n) in idx.iter().zip(&self.dims) {
            debug_assert!(i >= 1 && i <= n);
            off = off * n + (i - 1);
        }
        off
    }

    pub fn unoffset(&self, mut off: usize) -> MultiIndex {
        let mut coords = vec![0; self.dims.len()];
        for (slot, &n) in coords.iter_mut().zip(&self.dims).rev() {
            *slot = off % n + 1;
            off /= n;
        }
        MultiIndex::new(coords)
    }

    pub fn get(&self, idx: &[usize]) -> &Rational {
        &self.entries[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Rational) {
        let off = self.offset(idx);
        self.entries[off] = value;
    }

    /// Bounds-checked entry lookup.
    pub fn entry(&self, idx: &MultiIndex) -> Result<&Rational> {
        let checked = MultiIndex::checked_for(idx.coords().to_vec(), &self.dims)?;
        Ok(self.get(checked.coords()))
    }

    /// Iterate all multi-indexes in layout order (last index fastest).
    pub fn indices(&self) -> IndexIter {
        IndexIter::new(self.dims.clone())
    }

    /// Sub-tensor obtained by fixing the selector's axes. Order-0 results come
    /// back as a 1-extent order-1 tensor holding the scalar.
    pub fn extract_plane(&self, sel: &PlaneSelector) -> Result<Tensor> {
        let d = self.order();
        for (&axis, &value) in sel.fixed() {
            if axis < 1 || axis > d {
                return Err(Error::AxisOutOfRange { axis, order: d });
            }
            let extent = self.dims[axis - 1];
            if value < 1 || value > extent {
                return Err(Error::IndexOutOfRange {
                    axis,
                    value,
                    extent,
                });
            }
        }
        let free_axes: Vec<usize> = (1..=d).filter(|a| !sel.fixed().contains_key(a)).collect();
        if free_axes.is_empty() {
            let idx: Vec<usize> = (1..=d).map(|a| sel.fixed()[&a]).collect();
            return Tensor::new(vec![1], vec![self.get(&idx).clone()]);
        }
        let sub_dims: Vec<usize> = free_axes.iter().map(|&a| self.dims[a - 1]).collect();
        let mut entries = Vec::with_capacity(sub_dims.iter().product());
        let mut full = vec![0usize; d];
        for (&axis, &value) in sel.fixed() {
            full[axis - 1] = value;
        }
        for sub_idx in IndexIter::new(sub_dims.clone()) {
            for (&axis, &c) in free_axes.iter().zip(sub_idx.coords()) {
                full[axis - 1] = c;
            }
            entries.push(self.get(&full).clone());
        }
        Tensor::new(sub_dims, entries)
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Tensor) -> Result<Tensor> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(self.dims.clone(), other.dims.clone()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .collect();
        Tensor::new(self.dims.clone(), entries)
    }

    pub fn scale(&self, c: &Rational) -> Tensor {
        Tensor {
            dims: self.dims.clone(),
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(self.dims.clone(), other.dims.clone()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Tensor::new(self.dims.clone(), entries)
    }

    /// Axis permutation: the result at (i_1..i_d) equals self at (i_{sigma(1)}..i_{sigma(d)}).
    /// `sigma` is given as 1-based images.
    pub fn sigma_transpose(&self, sigma: &[usize]) -> Result<Tensor> {
        let d = self.order();
        if sigma.len() != d {
            return Err(Error::LengthMismatch(sigma.len(), d));
        }
        let mut seen = vec![false; d];
        for &s in sigma {
            if s < 1 || s > d || seen[s - 1] {
                return Err(Error::NotPermutation(d));
            }
            seen[s - 1] = true;
        }
        // result axis j has the extent of the axis sigma maps onto it
        let mut out_dims = vec![0usize; d];
        for (k0, &s) in sigma.iter().enumerate() {
            out_dims[s - 1] = self.dims[k0];
        }
        let mut entries = Vec::with_capacity(self.len());
        let mut src = vec![0usize; d];
        for idx in IndexIter::new(out_dims.clone()) {
            for (k0, &s) in sigma.iter().enumerate() {
                src[k0] = idx.coords()[s - 1];
            }
            entries.push(self.get(&src).clone());
        }
        Tensor::new(out_dims, entries)
    }

    /// Order-3 only: matrix of sums along the dropped axis.
    pub fn plus_projection(&self, dropped_axis: usize) -> Result<Tensor> {
        if self.order() != 3 {
            return Err(Error::BadOrder {
                got: self.order(),
                need: "3",
            });
        }
        if dropped_axis < 1 || dropped_axis > 3 {
            return Err(Error::AxisOutOfRange {
                axis: dropped_axis,
                order: 3,
            });
        }
        let kept: Vec<usize> = (1..=3).filter(|&a| a != dropped_axis).collect();
        let out_dims = vec![self.dims[kept[0] - 1], self.dims[kept[1] - 1]];
        let mut out = Tensor::zeros(out_dims)?;
        let mut full = vec![0usize; 3];
        for idx in IndexIter::new(out.dims.clone()) {
            let mut sum = Rational::zero();
            for v in 1..=self.dims[dropped_axis - 1] {
                full[kept[0] - 1] = idx.coords()[0];
                full[kept[1] - 1] = idx.coords()[1];
                full[dropped_axis - 1] = v;
                sum += self.get(&full);
            }
            out.set(idx.coords(), sum);
        }
        Ok(out)
    }

    /// Count of exactly-zero entries.
    pub fn zero_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_zero()).count()
    }
}

/// Lexicographic multi-index iterator, last index fastest.
pub struct IndexIter {
    dims: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl IndexIter {
    pub fn new(dims: Vec<usize>) -> IndexIter {
        let next = if dims.iter().any(|&n| n == 0) {
            None
        } else {
            Some(vec![1; dims.len()])
        };
        IndexIter { dims, next }
    }
}

impl Iterator for IndexIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut done = true;
        for pos in (0..succ.len()).rev() {
            if succ[pos] < self.dims[pos] {
                succ[pos] += 1;
                for later in succ.iter_mut().skip(pos + 1) {
                    *later = 1;
                }
                done = false;
                break;
            }
        }
        if !done {
            self.next = Some(succ);
        }
        Some(MultiIndex::new(cur))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    pub(crate) fn t(dims: &[usize], vals: &[i64]) -> Tensor {
        Tensor::new(dims.to_vec(), vals.iter().map(|&v| int(v)).collect()).unwrap()
    }

    /// The paper's 2x2x2 tensor with frontal slices [[1,0],[0,1]] and [[0,1],[1,0]].
    pub(crate) fn tensor_b() -> Tensor {
        t(&[2, 2, 2], &[1, 0, 0, 1, 0, 1, 1, 0])
    }

    #[test]
    fn layout_is_last_index_fastest() {
        let b = tensor_b();
        assert_eq!(b.get(&[1, 1, 1]), &int(1));
        assert_eq!(b.get(&[1, 1, 2]), &int(0));
        assert_eq!(b.get(&[1, 2, 1]), &int(0));
        assert_eq!(b.get(&[1, 2, 2]), &int(1));
        assert_eq!(b.get(&[2, 1, 1]), &int(0));
        assert_eq!(b.get(&[2, 1, 2]), &int(1));
        assert_eq!(b.get(&[2, 2, 1]), &int(1));
        assert_eq!(b.get(&[2, 2, 2]), &int(0));
    }

    #[test]
    fn frontal_slices_of_b_match() {
        let b = tensor_b();
        let s1 = b.extract_plane(&PlaneSelector::new().fix(3, 1)).unwrap();
        assert_eq!(s1, t(&[2, 2], &[1, 0, 0, 1]));
        let s2 = b.extract_plane(&PlaneSelector::new().fix(3, 2)).unwrap();
        assert_eq!(s2, t(&[2, 2], &[0, 1, 1, 0]));
    }

    #[test]
    fn order_one_and_matrix_layout() {
        let v = t(&[1], &[5]);
        assert_eq!(v.get(&[1]), &int(5));
        let m = t(&[2, 2], &[1, 2, 3, 4]);
        assert_eq!(m.get(&[1, 1]), &int(1));
        assert_eq!(m.get(&[1, 2]), &int(2));
        assert_eq!(m.get(&[2, 1]), &int(3));
        assert_eq!(m.get(&[2, 2]), &int(4));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            Tensor::new(vec![2, 2], vec![int(1); 3]),
            Err(Error::EntryCountMismatch { got: 3, expected: 4 })
        ));
        assert!(matches!(
            Tensor::new(vec![2, 0], vec![]),
            Err(Error::ZeroExtent)
        ));
    }

    #[test]
    fn identity_and_ones() {
        let i3 = Tensor::identity(3, 3);
        assert_eq!(i3.entries().iter().filter(|e| e.is_one()).count(), 3);
        assert_eq!(i3.get(&[2, 2, 2]), &int(1));
        assert_eq!(i3.get(&[1, 2, 2]), &int(0));
        let i = Tensor::identity(3, 2);
        assert_eq!(i, t(&[3, 3], &[1, 0, 0, 0, 1, 0, 0, 0, 1]));
        let single = Tensor::identity(1, 4);
        assert_eq!(single.entries(), &[int(1)]);
        let j3 = Tensor::ones(3, 3);
        assert_eq!(j3.len(), 27);
        assert!(j3.entries().iter().all(|e| e.is_one()));
        assert_eq!(Tensor::ones(2, 4).len(), 16);
    }

    #[test]
    fn extract_line_and_identity_selector() {
        let j3 = Tensor::ones(3, 3);
        let line = j3
            .extract_plane(&PlaneSelector::new().fix(1, 2).fix(2, 3))
            .unwrap();
        assert_eq!(line, t(&[3], &[1, 1, 1]));
        let whole = j3.extract_plane(&PlaneSelector::new()).unwrap();
        assert_eq!(whole, j3);
        let scalar = tensor_b()
            .extract_plane(&PlaneSelector::new().fix(1, 2).fix(2, 2).fix(3, 1))
            .unwrap();
        assert_eq!(scalar, t(&[1], &[1]));
    }

    #[test]
    fn extract_plane_composes() {
        let b = tensor_b();
        let joint = b
            .extract_plane(&PlaneSelector::new().fix(1, 2).fix(3, 1))
            .unwrap();
        let step = b
            .extract_plane(&PlaneSelector::new().fix(3, 1))
            .unwrap()
            // after fixing axis 3, original axis 1 is still axis 1
            .extract_plane(&PlaneSelector::new().fix(1, 2))
            .unwrap();
        assert_eq!(joint, step);
    }

    #[test]
    fn extract_plane_errors() {
        let b = tensor_b();
        assert!(b.extract_plane(&PlaneSelector::new().fix(4, 1)).is_err());
        assert!(b.extract_plane(&PlaneSelector::new().fix(2, 3)).is_err());
    }

    #[test]
    fn hadamard_scale_add() {
        let b = tensor_b();
        let j = Tensor::ones(2, 3);
        assert_eq!(b.hadamard(&j).unwrap(), b);
        assert_eq!(b.hadamard(&b).unwrap(), b);
        let z = Tensor::zeros(vec![2, 2, 2]).unwrap();
        assert_eq!(b.hadamard(&z).unwrap(), z);
        assert!(b.hadamard(&Tensor::ones(2, 2)).is_err());

        let third = Tensor::ones(3, 3).scale(&ratio(1, 3));
        assert!(third.entries().iter().all(|e| e == &ratio(1, 3)));
        assert_eq!(b.scale(&int(1)), b);
        assert_eq!(b.scale(&int(0)), z);
        assert_eq!(b.add(&z).unwrap(), b);
    }

    #[test]
    fn sigma_transpose_is_matrix_transpose_for_order_two() {
        let m = t(&[2, 3], &[1, 2, 3, 4, 5, 6]);
        let mt = m.sigma_transpose(&[2, 1]).unwrap();
        assert_eq!(mt.dims(), &[3, 2]);
        assert_eq!(mt, t(&[3, 2], &[1, 4, 2, 5, 3, 6]));
        assert_eq!(m.sigma_transpose(&[1, 2]).unwrap(), m);
        assert!(m.sigma_transpose(&[1, 1]).is_err());
        assert!(m.sigma_transpose(&[1]).is_err());
    }

    #[test]
    fn sigma_transpose_entry_rule() {
        let b = tensor_b();
        let sigma = [2, 3, 1];
        let tr = b.sigma_transpose(&sigma).unwrap();
        for idx in tr.indices() {
            let i = idx.coords();
            let src = [
                i[sigma[0] - 1],
                i[sigma[1] - 1],
                i[sigma[2] - 1],
            ];
            assert_eq!(tr.get(i), b.get(&src));
        }
    }

    #[test]
    fn plus_projection_basics() {
        let j3 = Tensor::ones(3, 3);
        for axis in 1..=3 {
            let p = j3.plus_projection(axis).unwrap();
            assert!(p.entries().iter().all(|e| e == &int(3)));
        }
        let i3 = Tensor::identity(3, 3);
        assert_eq!(i3.plus_projection(3).unwrap(), Tensor::identity(3, 2));
        assert!(Tensor::ones(2, 2).plus_projection(1).is_err());
        assert!(j3.plus_projection(4).is_err());
    }

    #[test]
    fn plus_projection_commutes_with_scale() {
        let b = tensor_b();
        let c = ratio(3, 7);
        assert_eq!(
            b.scale(&c).plus_projection(2).unwrap(),
            b.plus_projection(2).unwrap().scale(&c)
        );
    }

    #[test]
    fn offset_roundtrip() {
        let b = t(&[2, 3, 4], &(0..24).collect::<Vec<_>>());
        for (pos, idx) in b.indices().enumerate() {
            assert_eq!(b.offset(idx.coords()), pos);
            assert_eq!(b.unoffset(pos), idx);
        }
    }
}
