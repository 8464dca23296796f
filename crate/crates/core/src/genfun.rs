//! Cayley's combinatorial hyperdeterminant and character-weighted
//! generalized tensor functions.

use num_traits::{One, Signed, Zero};

use crate::combinat::{diagonal_patterns, permutations, Permutation};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational};
use crate::tensor::Tensor;

/// An explicit subgroup of S_n together with a rational class function on it.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterSpec {
    elements: Vec<Permutation>,
    values: Vec<Rational>,
}

impl CharacterSpec {
    /// Validates closure under composition and inverse, class-constancy of
    /// chi, and that chi(identity) is a positive integer.
    pub fn new(elements: Vec<Permutation>, values: Vec<Rational>) -> Result<CharacterSpec> {
        if elements.is_empty() {
            return Err(Error::InvalidCharacter("empty element list".into()));
        }
        if elements.len() != values.len() {
            return Err(Error::InvalidCharacter(
                "element and value counts differ".into(),
            ));
        }
        let n = elements[0].n();
        if elements.iter().any(|p| p.n() != n) {
            return Err(Error::InvalidCharacter("mixed degrees".into()));
        }
        let index = |p: &Permutation| elements.iter().position(|q| q == p);
        let mut seen = std::collections::HashSet::new();
        for p in &elements {
            if !seen.insert(p.images().to_vec()) {
                return Err(Error::InvalidCharacter(format!(
                    "duplicate element {:?}",
                    p.images()
                )));
            }
        }
        for p in &elements {
            if index(&p.inverse()).is_none() {
                return Err(Error::InvalidCharacter(format!(
                    "inverse of {:?} missing",
                    p.images()
                )));
            }
            for q in &elements {
                if index(&p.then(q)).is_none() {
                    return Err(Error::InvalidCharacter(format!(
                        "product of {:?} and {:?} missing",
                        p.images(),
                        q.images()
                    )));
                }
            }
        }
        let spec = CharacterSpec { elements, values };
        let id_val = spec.chi(&Permutation::identity(n)).ok_or_else(|| {
            Error::InvalidCharacter("identity missing from group".into())
        })?;
        if !id_val.is_integer() || !id_val.is_positive() {
            return Err(Error::InvalidCharacter(format!(
                "chi(identity) = {id_val} is not a positive integer"
            )));
        }
        // class-constancy: chi(h g h^-1) = chi(g)
        for g in &spec.elements {
            for h in &spec.elements {
                let conj = h.inverse().then(g).then(h);
                if spec.chi(&conj) != spec.chi(g) {
                    return Err(Error::InvalidCharacter(format!(
                        "chi is not constant on the class of {:?}",
                        g.images()
                    )));
                }
            }
        }
        Ok(spec)
    }

    /// Full symmetric group with the trivial character.
    pub fn symmetric_trivial(n: usize) -> CharacterSpec {
        let elements: Vec<Permutation> = permutations(n).collect();
        let values = vec![Rational::one(); elements.len()];
        CharacterSpec { elements, values }
    }

    /// Full symmetric group with the sign character.
    pub fn symmetric_sign(n: usize) -> CharacterSpec {
        let elements: Vec<Permutation> = permutations(n).collect();
        let values = elements.iter().map(|p| p.sign_rational()).collect();
        CharacterSpec { elements, values }
    }

    /// The one-element group, trivial character.
    pub fn trivial_group(n: usize) -> CharacterSpec {
        CharacterSpec {
            elements: vec![Permutation::identity(n)],
            values: vec![Rational::one()],
        }
    }

    pub fn degree_n(&self) -> usize {
        self.elements[0].n()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn chi(&self, p: &Permutation) -> Option<Rational> {
        self.elements
            .iter()
            .position(|q| q == p)
            .map(|i| self.values[i].clone())
    }

    fn chi_at(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    /// Parses a character table: one `perm: value` line each, permutations in
    /// one-line image notation ("2 3 1: -1"); `#` starts a comment.
    pub fn parse_table(text: &str) -> Result<CharacterSpec> {
        let mut elements = Vec::new();
        let mut values = Vec::new();
        for (lno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(h) => &raw[..h],
                None => raw,
            };
            if line.trim().is_empty() {
                continue;
            }
            let Some((lhs, rhs)) = line.split_once(':') else {
                return Err(Error::parse(lno + 1, 1, "expected \"perm: value\""));
            };
            let mut images = Vec::new();
            for tok in lhs.split_whitespace() {
                let v: usize = tok.parse().map_err(|_| {
                    Error::parse(lno + 1, 1, format!("bad image {tok:?}"))
                })?;
                images.push(v);
            }
            let p = Permutation::from_images(images)
                .map_err(|e| Error::parse(lno + 1, 1, e.to_string()))?;
            let v = parse_rational(rhs.trim())
                .ok_or_else(|| Error::parse(lno + 1, 1, format!("bad value {:?}", rhs.trim())))?;
            elements.push(p);
            values.push(v);
        }
        CharacterSpec::new(elements, values)
    }
}

/// Per-axis character data for the generalized function, or one spec reused
/// on every axis.
#[derive(Clone, Debug)]
pub enum GenFunSpec {
    PerAxis(Vec<CharacterSpec>),
    Uniform(CharacterSpec),
}

impl GenFunSpec {
    fn for_order(&self, d: usize) -> Result<Vec<&CharacterSpec>> {
        match self {
            GenFunSpec::Uniform(s) => Ok(vec![s; d]),
            GenFunSpec::PerAxis(v) => {
                if v.len() != d {
                    return Err(Error::LengthMismatch(v.len(), d));
                }
                Ok(v.iter().collect())
            }
        }
    }
}

/// Cayley's combinatorial hyperdeterminant:
/// (1/n!) sum over d-tuples of permutations of the sign-weighted products.
pub fn hyperdet(a: &Tensor) -> Result<Rational> {
    let n = a.cubical_dim()?;
    let d = a.order();
    let perms: Vec<Permutation> = permutations(n).collect();
    let signs: Vec<Rational> = perms.iter().map(|p| p.sign_rational()).collect();
    let factorial = Rational::from_integer(perms.len().into());
    let mut total = Rational::zero();
    let mut slots = vec![0usize; d];
    loop {
        let mut term = Rational::one();
        for s in &slots {
            term *= &signs[*s];
        }
        let mut idx = vec![0usize; d];
        for i in 1..=n {
            for (k, &s) in slots.iter().enumerate() {
                idx[k] = perms[s].image(i);
            }
            term *= a.get(&idx);
            if term.is_zero() {
                break;
            }
        }
        total += term;
        let mut pos = 0;
        while pos < d {
            slots[pos] += 1;
            if slots[pos] < perms.len() {
                break;
            }
            slots[pos] = 0;
            pos += 1;
        }
        if pos == d {
            break;
        }
    }
    Ok(total / factorial)
}

/// Generalized tensor function:
/// (1/|G_1|) sum over (pi_1..pi_d) in G_1 x ... x G_d of
/// chi_1(pi_1)...chi_d(pi_d) prod_i a_{pi_1(i)...pi_d(i)}.
pub fn gtf(a: &Tensor, spec: &GenFunSpec) -> Result<Rational> {
    let n = a.cubical_dim()?;
    let d = a.order();
    let specs = spec.for_order(d)?;
    for s in &specs {
        if s.degree_n() != n {
            return Err(Error::InvalidCharacter(format!(
                "group acts on [{}], tensor dimension is {n}",
                s.degree_n()
            )));
        }
    }
    let norm = Rational::from_integer(specs[0].order().into());
    let mut total = Rational::zero();
    let mut slots = vec![0usize; d];
    loop {
        let mut term = Rational::one();
        for (k, &s) in slots.iter().enumerate() {
            term *= specs[k].chi_at(s);
        }
        if !term.is_zero() {
            let mut idx = vec![0usize; d];
            for i in 1..=n {
                for (k, &s) in slots.iter().enumerate() {
                    idx[k] = specs[k].elements()[s].image(i);
                }
                term *= a.get(&idx);
                if term.is_zero() {
                    break;
                }
            }
            total += term;
        }
        let mut pos = 0;
        while pos < d {
            slots[pos] += 1;
            if slots[pos] < specs[pos].order() {
                break;
            }
            slots[pos] = 0;
            pos += 1;
        }
        if pos == d {
            break;
        }
    }
    Ok(total / norm)
}

/// The 2-permanent analog over a subgroup: sum over distance-n tuples
/// (pi_1..pi_n) from G of prod_i chi_i(pi_i) D(a_{pi_i}), with D the slice-i
/// diagonal product. `per_slice` supplies n slice characters; by default the
/// group's own character applies to every slice.
pub fn gtf2_3d(
    a: &Tensor,
    group: &CharacterSpec,
    per_slice: Option<&[CharacterSpec]>,
) -> Result<Rational> {
    if a.order() != 3 {
        return Err(Error::BadOrder {
            got: a.order(),
            need: "3",
        });
    }
    let n = a.cubical_dim()?;
    if group.degree_n() != n {
        return Err(Error::InvalidCharacter(format!(
            "group acts on [{}], tensor dimension is {n}",
            group.degree_n()
        )));
    }
    if let Some(slice_specs) = per_slice {
        if slice_specs.len() != n {
            return Err(Error::LengthMismatch(slice_specs.len(), n));
        }
        for s in slice_specs {
            if s.elements() != group.elements() {
                return Err(Error::InvalidCharacter(
                    "per-slice characters must live on the same group".into(),
                ));
            }
        }
    }

    let mut total = Rational::zero();
    let order = group.order();
    let mut slots = vec![0usize; n];

    fn distance_n(a: &Permutation, b: &Permutation) -> bool {
        a.images().iter().zip(b.images()).all(|(x, y)| x != y)
    }

    loop {
        let tuple: Vec<&Permutation> = slots.iter().map(|&s| &group.elements()[s]).collect();
        let ok = (0..n).all(|i| (i + 1..n).all(|j| distance_n(tuple[i], tuple[j])));
        if ok {
            let mut term = Rational::one();
            for (i0, p) in tuple.iter().enumerate() {
                let chi = match per_slice {
                    Some(specs) => specs[i0].chi_at(slots[i0]).clone(),
                    None => group.chi_at(slots[i0]).clone(),
                };
                term *= chi;
                if term.is_zero() {
                    break;
                }
                for j in 1..=n {
                    term *= a.get(&[j, p.image(j), i0 + 1]);
                    if term.is_zero() {
                        break;
                    }
                }
                if term.is_zero() {
                    break;
                }
            }
            total += term;
        }
        let mut pos = 0;
        while pos < n {
            slots[pos] += 1;
            if slots[pos] < order {
                break;
            }
            slots[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    Ok(total)
}

/// Scalar weight applied to a k-per diagonal's entry list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightFunction {
    /// f = 1: recovers the k-permanent.
    One,
    /// 1 when every selected entry is positive, else 0.
    IndicatorPositive,
    /// Sign of the product of the selected entries.
    ProductSign,
}

impl WeightFunction {
    pub fn from_name(name: &str) -> Result<WeightFunction> {
        match name {
            "one" => Ok(WeightFunction::One),
            "indicator-positive" => Ok(WeightFunction::IndicatorPositive),
            "product-sign" => Ok(WeightFunction::ProductSign),
            other => Err(Error::UnknownWeight(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightFunction::One => "one",
            WeightFunction::IndicatorPositive => "indicator-positive",
            WeightFunction::ProductSign => "product-sign",
        }
    }

    pub fn eval(&self, entries: &[&Rational]) -> Rational {
        match self {
            WeightFunction::One => Rational::one(),
            WeightFunction::IndicatorPositive => {
                if entries.iter().all(|e| e.is_positive()) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            WeightFunction::ProductSign => {
                if entries.iter().any(|e| e.is_zero()) {
                    return Rational::zero();
                }
                let negatives = entries.iter().filter(|e| e.is_negative()).count();
                if negatives % 2 == 0 {
                    Rational::one()
                } else {
                    -Rational::one()
                }
            }
        }
    }
}

/// k-generalized tensor function: sum over k-per patterns D of
/// f(A on D) * prod(A on D).
pub fn kgtf(a: &Tensor, k: usize, f: WeightFunction) -> Result<Rational> {
    let n = a.cubical_dim()?;
    let d = a.order();
    if k < 1 || k >= d {
        return Err(Error::LevelOutOfRange { k, order: d });
    }
    let mut total = Rational::zero();
    for pattern in diagonal_patterns(d, n, k)? {
        let pattern = pattern?;
        let entries: Vec<&Rational> = pattern
            .cells()
            .iter()
            .map(|c| a.get(c.coords()))
            .collect();
        let weight = f.eval(&entries);
        if weight.is_zero() {
            continue;
        }
        let mut prod = weight;
        for e in entries {
            if e.is_zero() {
                prod = Rational::zero();
                break;
            }
            prod *= e;
        }
        total += prod;
    }
    Ok(total)
}
