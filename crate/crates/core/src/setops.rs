//! Finite sets in an ambient group and the exact additive statistics that
//! gate both structure theorems: sumsets, indicator convolution, additive
//! energy, and doubling constants. Everything here is integer/rational
//! arithmetic; no floating point.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::group::{canon, group_arith, Element, GroupOp, GroupSpec};

/// Exact nonnegative rational used for energy ratios and doubling constants.
pub type Rational = Ratio<u128>;

/// A finite, deduplicated, canonically-sorted set of elements over one spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSet {
    spec: GroupSpec,
    elems: Vec<Element>,
}

impl GSet {
    pub fn empty(spec: GroupSpec) -> Self {
        GSet {
            spec,
            elems: Vec::new(),
        }
    }

    /// Build from raw coordinate vectors, canonicalizing and deduplicating.
    pub fn from_raw<I>(spec: GroupSpec, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<i64>>,
    {
        let elems = raw
            .into_iter()
            .map(|coords| canon(&coords, &spec))
            .collect::<Result<Vec<_>>>()?;
        Self::from_elements(spec, elems)
    }

    /// Build from elements; canon is idempotent, so re-reducing folds any
    /// non-canonical input, and duplicates collapse.
    pub fn from_elements(spec: GroupSpec, elems: Vec<Element>) -> Result<Self> {
        let mut elems = elems
            .into_iter()
            .map(|e| canon(e.coords(), &spec))
            .collect::<Result<Vec<_>>>()?;
        elems.sort();
        elems.dedup();
        Ok(GSet { spec, elems })
    }

    pub fn singleton(spec: GroupSpec, raw: &[i64]) -> Result<Self> {
        let e = canon(raw, &spec)?;
        Ok(GSet {
            spec,
            elems: vec![e],
        })
    }

    /// Integer sets `{a_0, a_1, ...}` over `Z` come up constantly in tests
    /// and generators.
    pub fn from_ints(values: impl IntoIterator<Item = i64>) -> Self {
        let spec = GroupSpec::integers(1).expect("rank 1 is valid");
        GSet::from_raw(spec, values.into_iter().map(|v| vec![v])).expect("rank matches")
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Element> {
        self.elems.iter()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elems
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    /// First `n` elements in canonical order.
    pub fn prefix(&self, n: usize) -> GSet {
        GSet {
            spec: self.spec.clone(),
            elems: self.elems[..n.min(self.elems.len())].to_vec(),
        }
    }

    pub fn union(&self, other: &GSet) -> Result<GSet> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch);
        }
        let mut elems = self.elems.clone();
        elems.extend(other.elems.iter().cloned());
        GSet::from_elements(self.spec.clone(), elems)
    }

    pub fn difference(&self, other: &GSet) -> Result<GSet> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch);
        }
        let elems = self
            .elems
            .iter()
            .filter(|e| !other.contains(e))
            .cloned()
            .collect();
        Ok(GSet {
            spec: self.spec.clone(),
            elems,
        })
    }

    pub fn is_subset_of(&self, other: &GSet) -> bool {
        self.spec == other.spec && self.elems.iter().all(|e| other.contains(e))
    }

    pub fn is_disjoint_from(&self, other: &GSet) -> bool {
        self.elems.iter().all(|e| !other.contains(e))
    }

    /// `{-a : a in A}`.
    pub fn negate(&self) -> GSet {
        let zero = self.spec.zero();
        let elems = self
            .elems
            .iter()
            .map(|e| group_arith(e, &zero, GroupOp::Neg, &self.spec).expect("rank matches"))
            .collect();
        GSet::from_elements(self.spec.clone(), elems).expect("canonical input")
    }

    /// `{t + a : a in A}`.
    pub fn translate(&self, t: &Element) -> Result<GSet> {
        let elems = self
            .elems
            .iter()
            .map(|e| group_arith(e, t, GroupOp::Add, &self.spec))
            .collect::<Result<Vec<_>>>()?;
        GSet::from_elements(self.spec.clone(), elems)
    }
}

/// Exact additive-energy certificate: `energy = E(A)`, `c = E(A) / |A|^3`.
///
/// For nonempty `A`, `|A|^2 <= E(A) <= |A|^3` and `0 < c <= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyCertificate {
    pub energy: u128,
    pub size: usize,
    pub c: Rational,
}

/// `{a + b : a in A, b in B}`, deduplicated.
pub fn sumset(a: &GSet, b: &GSet) -> Result<GSet> {
    if a.spec() != b.spec() {
        return Err(Error::SpecMismatch);
    }
    let spec = a.spec();
    let mut elems = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            elems.push(group_arith(x, y, GroupOp::Add, spec)?);
        }
    }
    GSet::from_elements(spec.clone(), elems)
}

/// The representation function of `A + B`: maps `x` to
/// `#{(a, b) in A x B : a + b = x}`. The support equals `sumset(A, B)` and
/// the total mass is `|A| * |B|`. Sparse by construction, so unbounded specs
/// work unchanged.
pub fn convolve_indicators(a: &GSet, b: &GSet) -> Result<BTreeMap<Element, u64>> {
    if a.spec() != b.spec() {
        return Err(Error::SpecMismatch);
    }
    let spec = a.spec();
    let mut counts = BTreeMap::new();
    for x in a.iter() {
        for y in b.iter() {
            let s = group_arith(x, y, GroupOp::Add, spec)?;
            *counts.entry(s).or_insert(0u64) += 1;
        }
    }
    Ok(counts)
}

/// Additive energy `E(A) = #{(a,b,c,d) in A^4 : a + b = c + d}`, computed as
/// the second moment of the representation function in `O(|A|^2)` time.
pub fn additive_energy(a: &GSet) -> Result<EnergyCertificate> {
    if a.is_empty() {
        return Err(Error::EmptyInput("additive_energy"));
    }
    let r = convolve_indicators(a, a)?;
    let energy: u128 = r.values().map(|&m| (m as u128) * (m as u128)).sum();
    let n = a.len() as u128;
    let cube = n * n * n;
    debug_assert!(energy >= n * n && energy <= cube);
    Ok(EnergyCertificate {
        energy,
        size: a.len(),
        c: Rational::new(energy, cube),
    })
}

/// Doubling constant `K = |A + A| / |A|` as an exact rational.
pub fn doubling(a: &GSet) -> Result<Rational> {
    if a.is_empty() {
        return Err(Error::EmptyInput("doubling"));
    }
    let s = sumset(a, a)?;
    Ok(Rational::new(s.len() as u128, a.len() as u128))
}
