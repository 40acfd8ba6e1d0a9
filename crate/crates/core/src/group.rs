//! Ambient abelian groups: products of cyclic factors `Z_m` and copies of the
//! integers, canonical element representation, componentwise arithmetic, and
//! wraparound-safe embedding of integer coordinates into finite tori.

use std::fmt;

use crate::error::{Error, Result};
use crate::setops::GSet;

/// One factor of an ambient group: either the integers or a cyclic group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    /// The integers (unbounded coordinate).
    Z,
    /// The cyclic group of order `m`, with `m >= 2`.
    Mod(u64),
}

impl Factor {
    pub fn is_finite(&self) -> bool {
        matches!(self, Factor::Mod(_))
    }
}

/// A product of [`Factor`]s. Rank is at least 1 and every finite modulus is
/// at least 2. Fourier operations require every factor to be finite.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<Factor>,
}

impl GroupSpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpec("rank must be at least 1".into()));
        }
        for f in &factors {
            if let Factor::Mod(m) = f {
                if *m < 2 {
                    return Err(Error::InvalidSpec(format!("modulus {m} must be >= 2")));
                }
            }
        }
        Ok(GroupSpec { factors })
    }

    /// `Z^d`.
    pub fn integers(d: usize) -> Result<Self> {
        Self::new(vec![Factor::Z; d])
    }

    /// `Z_m`.
    pub fn cyclic(m: u64) -> Result<Self> {
        Self::new(vec![Factor::Mod(m)])
    }

    /// `Z_{m_1} x ... x Z_{m_d}`.
    pub fn cyclic_product(moduli: &[u64]) -> Result<Self> {
        Self::new(moduli.iter().map(|&m| Factor::Mod(m)).collect())
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_fully_finite(&self) -> bool {
        self.factors.iter().all(Factor::is_finite)
    }

    /// Group order for fully finite specs, `None` otherwise.
    pub fn order(&self) -> Option<u128> {
        self.factors.iter().try_fold(1u128, |acc, f| match f {
            Factor::Mod(m) => acc.checked_mul(*m as u128),
            Factor::Z => None,
        })
    }

    /// The identity element.
    pub fn zero(&self) -> Element {
        Element {
            coords: vec![0; self.rank()],
        }
    }

    fn check_rank(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: len,
            });
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.iter().all(|f| *f == Factor::Z) && self.rank() > 1 {
            return write!(out, "Z^{}", self.rank());
        }
        for (i, f) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(out, " x ")?;
            }
            match f {
                Factor::Z => write!(out, "Z")?,
                Factor::Mod(m) => write!(out, "Z_{m}")?,
            }
        }
        Ok(())
    }
}

/// A canonical group element: finite coordinates lie in `[0, m)`, integer
/// coordinates are arbitrary. Ordering is lexicographic on coordinates and is
/// only meaningful between elements of one spec.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    coords: Vec<i64>,
}

impl Element {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// Arithmetic operation selector for [`group_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOp {
    Add,
    Sub,
    /// Negate the first operand; the second is ignored.
    Neg,
}

/// Reduce a raw coordinate vector to its canonical representative.
pub fn canon(raw: &[i64], spec: &GroupSpec) -> Result<Element> {
    spec.check_rank(raw.len())?;
    let coords = raw
        .iter()
        .zip(spec.factors())
        .map(|(&c, f)| match f {
            Factor::Z => c,
            Factor::Mod(m) => c.rem_euclid(*m as i64),
        })
        .collect();
    Ok(Element { coords })
}

/// Componentwise add/subtract/negate followed by canonicalization.
pub fn group_arith(a: &Element, b: &Element, op: GroupOp, spec: &GroupSpec) -> Result<Element> {
    spec.check_rank(a.coords.len())?;
    spec.check_rank(b.coords.len())?;
    let combine = |x: &i64, y: &i64| match op {
        GroupOp::Add => x.checked_add(*y),
        GroupOp::Sub => x.checked_sub(*y),
        GroupOp::Neg => x.checked_neg(),
    };
    let raw: Vec<i64> = a
        .coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| combine(x, y).ok_or(Error::CoordinateOverflow))
        .collect::<Result<_>>()?;
    canon(&raw, spec)
}

/// Sum of `signs[i] * elems[i]`, canonicalized. Signs outside {-1,0,1} are a
/// caller bug and are rejected.
pub fn signed_sum(elems: &[Element], signs: &[i8], spec: &GroupSpec) -> Result<Element> {
    if elems.len() != signs.len() {
        return Err(Error::DimensionMismatch {
            expected: elems.len(),
            got: signs.len(),
        });
    }
    let mut wide = vec![0i128; spec.rank()];
    for (e, &s) in elems.iter().zip(signs) {
        if !(-1..=1).contains(&s) {
            return Err(Error::InvalidParameter(format!(
                "sign {s} not in {{-1,0,1}}"
            )));
        }
        spec.check_rank(e.coords.len())?;
        for (acc, &c) in wide.iter_mut().zip(&e.coords) {
            *acc += s as i128 * c as i128;
        }
    }
    let raw = wide
        .into_iter()
        .map(|c| i64::try_from(c).map_err(|_| Error::CoordinateOverflow))
        .collect::<Result<Vec<_>>>()?;
    canon(&raw, spec)
}

/// Record of an integer-to-torus embedding produced by [`embed_to_torus`].
///
/// Every previously unbounded coordinate `i` was shifted by `shifts[i]` and
/// reduced modulo a power of two `N_i` chosen so that any signed sum of at
/// most `headroom * (|A| + 2)` elements of the shifted set evaluates without
/// wraparound. Finite coordinates pass through untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusEmbedding {
    source: GroupSpec,
    target: GroupSpec,
    shifts: Vec<i64>,
    /// Per-coordinate wraparound-free half-window: shifted values with
    /// absolute value at most `windows[i]` embed injectively.
    windows: Vec<i64>,
}

impl TorusEmbedding {
    pub fn source_spec(&self) -> &GroupSpec {
        &self.source
    }

    pub fn target_spec(&self) -> &GroupSpec {
        &self.target
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    /// Map one element into the torus, rejecting coordinates outside the
    /// guarantee window.
    pub fn embed_element(&self, x: &Element) -> Result<Element> {
        if x.coords.len() != self.source.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.source.rank(),
                got: x.coords.len(),
            });
        }
        let mut raw = Vec::with_capacity(x.coords.len());
        for (i, &c) in x.coords.iter().enumerate() {
            match self.source.factors()[i] {
                Factor::Mod(_) => raw.push(c),
                Factor::Z => {
                    let shifted = c
                        .checked_sub(self.shifts[i])
                        .ok_or(Error::CoordinateOverflow)?;
                    if shifted.abs() > self.windows[i] {
                        return Err(Error::OutsideEmbeddingWindow(x.coords.clone()));
                    }
                    raw.push(shifted);
                }
            }
        }
        canon(&raw, &self.target)
    }

    /// Map a whole set into the torus.
    pub fn embed_set(&self, a: &GSet) -> Result<GSet> {
        if a.spec() != &self.source {
            return Err(Error::SpecMismatch);
        }
        let elems = a
            .iter()
            .map(|x| self.embed_element(x))
            .collect::<Result<Vec<_>>>()?;
        GSet::from_elements(self.target.clone(), elems)
    }

    /// Inverse of [`Self::embed_element`] on the guarantee window: torus residues
    /// are lifted to the centered representative and unshifted.
    pub fn unembed_element(&self, y: &Element) -> Result<Element> {
        if y.coords.len() != self.target.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.target.rank(),
                got: y.coords.len(),
            });
        }
        let mut raw = Vec::with_capacity(y.coords.len());
        for (i, &c) in y.coords.iter().enumerate() {
            match self.source.factors()[i] {
                Factor::Mod(_) => raw.push(c),
                Factor::Z => {
                    let n = match self.target.factors()[i] {
                        Factor::Mod(n) => n as i64,
                        Factor::Z => unreachable!("target spec is fully finite"),
                    };
                    let centered = if c > n / 2 { c - n } else { c };
                    raw.push(centered + self.shifts[i]);
                }
            }
        }
        canon(&raw, &self.source)
    }

    pub fn unembed_set(&self, a: &GSet) -> Result<GSet> {
        let elems = a
            .iter()
            .map(|y| self.unembed_element(y))
            .collect::<Result<Vec<_>>>()?;
        GSet::from_elements(self.source.clone(), elems)
    }
}

fn next_power_of_two_above(x: u64) -> u64 {
    let mut n = 1u64;
    while n <= x {
        n *= 2;
    }
    n
}

/// Embed a set over a spec with integer factors into a fully finite torus.
///
/// Each unbounded coordinate is shifted so its minimum over `A` is
/// nonnegative (sets that are already nonnegative are left unshifted) and
/// reduced modulo `N_i`, the smallest power of two strictly greater than
/// `2 * headroom * (|A| + 2) * W_i`, where `W_i` is the largest shifted
/// coordinate (clamped to at least 1). Any signed sum of at most
/// `headroom * (|A| + 2)` elements of the shifted set then evaluates without
/// wraparound, so additive energy, sumsets, spans of subsets, and indicator
/// convolutions agree between the integer model and the torus model.
pub fn embed_to_torus(a: &GSet, headroom: u64) -> Result<(GSet, TorusEmbedding)> {
    if a.is_empty() {
        return Err(Error::EmptyInput("embed_to_torus"));
    }
    if headroom < 1 {
        return Err(Error::InvalidParameter("headroom must be >= 1".into()));
    }
    let spec = a.spec();
    let k = headroom * (a.len() as u64 + 2);
    let mut shifts = vec![0i64; spec.rank()];
    let mut windows = vec![0i64; spec.rank()];
    let mut target_factors = Vec::with_capacity(spec.rank());
    for (i, f) in spec.factors().iter().enumerate() {
        match f {
            Factor::Mod(m) => {
                target_factors.push(Factor::Mod(*m));
                windows[i] = i64::MAX;
            }
            Factor::Z => {
                let min = a.iter().map(|x| x.coords()[i]).min().unwrap();
                let shift = min.min(0);
                let mut w = 1u64;
                for x in a.iter() {
                    let shifted = x.coords()[i]
                        .checked_sub(shift)
                        .ok_or(Error::CoordinateOverflow)?;
                    w = w.max(shifted.unsigned_abs());
                }
                let span_bound = (2 * k)
                    .checked_mul(w)
                    .filter(|&b| b < 1 << 62)
                    .ok_or(Error::CoordinateOverflow)?;
                let n = next_power_of_two_above(span_bound);
                shifts[i] = shift;
                windows[i] = (k * w) as i64;
                target_factors.push(Factor::Mod(n));
            }
        }
    }
    let embedding = TorusEmbedding {
        source: spec.clone(),
        target: GroupSpec::new(target_factors)?,
        shifts,
        windows,
    };
    let embedded = embedding.embed_set(a)?;
    Ok((embedded, embedding))
}
