//! Dissociativity decisions with witnesses, greedy maximal dissociated
//! subsets, and span enumeration/membership with sign-vector certificates.
//!
//! A set `L` is dissociated when the only sign pattern in `{-1,0,1}^L`
//! whose signed sum vanishes is the all-zero pattern. Spans are the sets of
//! all such signed sums. A maximal dissociated subset `L` of `A` always
//! satisfies `A ⊆ Span(L)`: any rejected element is a signed sum of chosen
//! ones.
//!
//! Witnesses and membership certificates are canonical: among all sign
//! vectors that qualify, the one returned is lexicographically least over
//! the support in canonical element order, with the per-position sign
//! preference `0 < +1 < -1`. That makes certificates reproducible across
//! runs and platforms, and makes the all-zero vector the canonical
//! certificate for `0`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{canon, signed_sum, Element, GroupSpec};
use crate::setops::GSet;

/// Size cap for brute-force dissociativity checks (3^13 sign vectors).
pub const BRUTE_CAP: usize = 13;
/// Size cap for meet-in-the-middle searches (3^15 hashed half-sums).
pub const MITM_CAP: usize = 30;
/// Size cap for full span enumeration.
pub const SPAN_ENUM_CAP: usize = 16;
/// Ground-set cap for exhaustive dissociated-subset search.
pub const EXACT_SEARCH_CAP: usize = 24;

/// Per-position sign preference used for lexicographic tie-breaking.
const SIGN_ORDER: [i8; 3] = [0, 1, -1];

/// A sign pattern over an ordered support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignVector {
    support: Vec<Element>,
    signs: Vec<i8>,
}

impl SignVector {
    pub fn new(support: Vec<Element>, signs: Vec<i8>) -> Result<Self> {
        if support.len() != signs.len() {
            return Err(Error::DimensionMismatch {
                expected: support.len(),
                got: signs.len(),
            });
        }
        if signs.iter().any(|s| !(-1..=1).contains(s)) {
            return Err(Error::InvalidParameter("signs must lie in {-1,0,1}".into()));
        }
        Ok(SignVector { support, signs })
    }

    pub fn zero(support: Vec<Element>) -> Self {
        let signs = vec![0; support.len()];
        SignVector { support, signs }
    }

    pub fn support(&self) -> &[Element] {
        &self.support
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_zero(&self) -> bool {
        self.signs.iter().all(|&s| s == 0)
    }

    /// The signed sum of the support under this pattern.
    pub fn eval(&self, spec: &GroupSpec) -> Result<Element> {
        signed_sum(&self.support, &self.signs, spec)
    }
}

/// A violation of dissociativity: a nonzero sign pattern summing to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DissociationWitness {
    sv: SignVector,
}

impl DissociationWitness {
    fn checked(sv: SignVector, spec: &GroupSpec) -> Result<Self> {
        if sv.is_zero() {
            return Err(Error::Precondition("witness has all-zero signs".into()));
        }
        if !sv.eval(spec)?.is_zero() {
            return Err(Error::Precondition("witness does not sum to zero".into()));
        }
        Ok(DissociationWitness { sv })
    }

    pub fn sign_vector(&self) -> &SignVector {
        &self.sv
    }
}

/// Outcome of a dissociativity decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DissociationVerdict {
    Dissociated,
    Not(DissociationWitness),
}

impl DissociationVerdict {
    pub fn is_dissociated(&self) -> bool {
        matches!(self, DissociationVerdict::Dissociated)
    }

    pub fn witness(&self) -> Option<&DissociationWitness> {
        match self {
            DissociationVerdict::Dissociated => None,
            DissociationVerdict::Not(w) => Some(w),
        }
    }
}

/// Search strategy for [`is_dissociated`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Pick automatically by size.
    Auto,
    /// Enumerate all 3^|L| sign vectors (cap [`BRUTE_CAP`]).
    Brute,
    /// Meet-in-the-middle over the two halves (cap [`MITM_CAP`]).
    Mitm,
}

/// Mode for sized dissociated-subset search and peeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Greedy scan; finding a set is sound, `None` is inconclusive.
    Greedy,
    /// Exhaustive branch and bound; `None` proves nonexistence.
    Exact,
}

/// Signs of the `len`-digit base-3 expansion of `rank`, most significant
/// digit first, digits mapped through [`SIGN_ORDER`]. Increasing rank is
/// exactly increasing lexicographic order.
fn rank_to_signs(mut rank: u64, len: usize) -> Vec<i8> {
    let mut signs = vec![0i8; len];
    for slot in signs.iter_mut().rev() {
        *slot = SIGN_ORDER[(rank % 3) as usize];
        rank /= 3;
    }
    signs
}

fn pow3(n: usize) -> u64 {
    3u64.pow(n as u32)
}

/// Meet-in-the-middle table over an ordered support, reusable across
/// membership queries. The support is split into a prefix of size
/// `floor(n/2)` and a hashed suffix of size `ceil(n/2)`; the table maps each
/// reachable suffix sum to the least suffix rank attaining it.
struct SpanSearcher {
    spec: GroupSpec,
    support: Vec<Element>,
    prefix_len: usize,
    table: HashMap<Vec<i64>, u64>,
    /// Least nonzero suffix rank whose sum is zero, if any.
    zero_nonzero: Option<u64>,
}

impl SpanSearcher {
    fn build(spec: &GroupSpec, support: &[Element], cap: usize) -> Result<Self> {
        if support.len() > cap {
            return Err(Error::Resource {
                what: "span search support",
                cap,
                got: support.len(),
            });
        }
        let prefix_len = support.len() / 2;
        let suffix = &support[prefix_len..];
        let mut searcher = SpanSearcher {
            spec: spec.clone(),
            support: support.to_vec(),
            prefix_len,
            table: HashMap::new(),
            zero_nonzero: None,
        };
        let mut acc = vec![0i64; spec.rank()];
        searcher.fill(suffix, 0, 0, &mut acc)?;
        Ok(searcher)
    }

    /// Depth-first enumeration of suffix sign patterns in lexicographic
    /// order; first insertion per sum value wins, so stored ranks are least.
    fn fill(
        &mut self,
        suffix: &[Element],
        depth: usize,
        rank: u64,
        acc: &mut Vec<i64>,
    ) -> Result<()> {
        if depth == suffix.len() {
            let key = canon(acc, &self.spec)?.coords().to_vec();
            if rank > 0 && key.iter().all(|&c| c == 0) && self.zero_nonzero.is_none() {
                self.zero_nonzero = Some(rank);
            }
            self.table.entry(key).or_insert(rank);
            return Ok(());
        }
        let coords: Vec<i64> = suffix[depth].coords().to_vec();
        for (digit, &sign) in SIGN_ORDER.iter().enumerate() {
            for (slot, &c) in acc.iter_mut().zip(&coords) {
                *slot += sign as i64 * c;
            }
            self.fill(suffix, depth + 1, rank * 3 + digit as u64, acc)?;
            for (slot, &c) in acc.iter_mut().zip(&coords) {
                *slot -= sign as i64 * c;
            }
        }
        Ok(())
    }

    /// Least sign vector over the support summing to `target`, or `None`.
    /// With `exclude_zero_vector`, the all-zero pattern is not a valid
    /// answer (used for witness search with `target = 0`).
    fn query(&self, target: &Element, exclude_zero_vector: bool) -> Result<Option<SignVector>> {
        let mut acc = vec![0i64; self.spec.rank()];
        let hit = self.search_prefix(target, exclude_zero_vector, 0, 0, &mut acc)?;
        Ok(hit.map(|(prefix_rank, suffix_rank)| {
            let mut signs = rank_to_signs(prefix_rank, self.prefix_len);
            signs.extend(rank_to_signs(
                suffix_rank,
                self.support.len() - self.prefix_len,
            ));
            SignVector {
                support: self.support.clone(),
                signs,
            }
        }))
    }

    /// Prefix patterns in lexicographic order; the first with a matching
    /// suffix wins, and within that bucket the stored suffix rank is least,
    /// so the combined vector is globally least.
    fn search_prefix(
        &self,
        target: &Element,
        exclude_zero_vector: bool,
        depth: usize,
        rank: u64,
        acc: &mut Vec<i64>,
    ) -> Result<Option<(u64, u64)>> {
        if depth == self.prefix_len {
            let needed: Vec<i64> = target
                .coords()
                .iter()
                .zip(acc.iter())
                .map(|(&t, &v)| t - v)
                .collect();
            let key = canon(&needed, &self.spec)?.coords().to_vec();
            let must_skip_zero_suffix = exclude_zero_vector && rank == 0;
            if must_skip_zero_suffix && key.iter().all(|&c| c == 0) {
                return Ok(self.zero_nonzero.map(|r| (rank, r)));
            }
            return Ok(self.table.get(&key).map(|&r| (rank, r)));
        }
        let coords: Vec<i64> = self.support[depth].coords().to_vec();
        for (digit, &sign) in SIGN_ORDER.iter().enumerate() {
            for (slot, &c) in acc.iter_mut().zip(&coords) {
                *slot += sign as i64 * c;
            }
            let hit = self.search_prefix(
                target,
                exclude_zero_vector,
                depth + 1,
                rank * 3 + digit as u64,
                acc,
            )?;
            for (slot, &c) in acc.iter_mut().zip(&coords) {
                *slot -= sign as i64 * c;
            }
            if hit.is_some() {
                return Ok(hit);
            }
        }
        Ok(None)
    }
}

fn brute_force_witness(l: &GSet) -> Result<Option<SignVector>> {
    let n = l.len();
    let elems = l.elements();
    for rank in 1..pow3(n) {
        let signs = rank_to_signs(rank, n);
        if signed_sum(elems, &signs, l.spec())?.is_zero() {
            return Ok(Some(SignVector {
                support: elems.to_vec(),
                signs,
            }));
        }
    }
    Ok(None)
}

/// Decide whether `L` is dissociated.
///
/// Sets containing the identity are immediately not dissociated, with the
/// `+1`-on-zero witness. Otherwise the returned witness is the
/// lexicographically least nonzero zero-sum pattern.
pub fn is_dissociated(l: &GSet, strategy: Strategy) -> Result<DissociationVerdict> {
    let spec = l.spec();
    let zero = spec.zero();
    if l.contains(&zero) {
        let signs = l
            .iter()
            .map(|e| if *e == zero { 1 } else { 0 })
            .collect::<Vec<i8>>();
        let sv = SignVector::new(l.elements().to_vec(), signs)?;
        return Ok(DissociationVerdict::Not(DissociationWitness::checked(
            sv, spec,
        )?));
    }
    let witness = match strategy {
        Strategy::Brute => {
            if l.len() > BRUTE_CAP {
                return Err(Error::Resource {
                    what: "is_dissociated (brute)",
                    cap: BRUTE_CAP,
                    got: l.len(),
                });
            }
            brute_force_witness(l)?
        }
        Strategy::Mitm => {
            if l.len() > MITM_CAP {
                return Err(Error::Resource {
                    what: "is_dissociated (meet-in-the-middle)",
                    cap: MITM_CAP,
                    got: l.len(),
                });
            }
            let searcher = SpanSearcher::build(spec, l.elements(), MITM_CAP)?;
            searcher.query(&zero, true)?
        }
        Strategy::Auto => {
            let pick = if l.len() <= 6 {
                Strategy::Brute
            } else {
                Strategy::Mitm
            };
            return is_dissociated(l, pick);
        }
    };
    match witness {
        None => Ok(DissociationVerdict::Dissociated),
        Some(sv) => Ok(DissociationVerdict::Not(DissociationWitness::checked(
            sv, spec,
        )?)),
    }
}

/// Greedy maximal dissociated subset: scan `A` in canonical order, keeping
/// each element that is not already in the span of the kept ones. The result
/// is dissociated and maximal in `A`, so `A ⊆ Span(result)`.
pub fn max_dissociated_greedy(a: &GSet) -> Result<GSet> {
    greedy_scan(a, None)
}

fn greedy_scan(a: &GSet, stop_at: Option<usize>) -> Result<GSet> {
    let spec = a.spec();
    let mut chosen: Vec<Element> = Vec::new();
    let mut searcher = SpanSearcher::build(spec, &chosen, MITM_CAP)?;
    for x in a.iter() {
        if searcher.query(x, false)?.is_none() {
            chosen.push(x.clone());
            if stop_at == Some(chosen.len()) {
                break;
            }
            searcher = SpanSearcher::build(spec, &chosen, MITM_CAP)?;
        }
    }
    GSet::from_elements(spec.clone(), chosen)
}

/// Find a dissociated subset of `A` of size exactly `l`.
///
/// `Greedy` returns the first `l` elements of the greedy maximal subset if
/// the greedy scan reaches size `l` (sound, since subsets of dissociated
/// sets are dissociated) and `None` if it stalls below `l` (inconclusive).
/// `Exact` is an exhaustive branch-and-bound over ground sets of at most
/// [`EXACT_SEARCH_CAP`] elements; its `None` proves nonexistence.
pub fn find_dissociated_of_size(a: &GSet, l: usize, mode: SearchMode) -> Result<Option<GSet>> {
    if l < 1 {
        return Err(Error::InvalidParameter("subset size l must be >= 1".into()));
    }
    match mode {
        SearchMode::Greedy => {
            let greedy = greedy_scan(a, Some(l))?;
            if greedy.len() >= l {
                Ok(Some(greedy.prefix(l)))
            } else {
                Ok(None)
            }
        }
        SearchMode::Exact => {
            if a.len() > EXACT_SEARCH_CAP {
                return Err(Error::Resource {
                    what: "find_dissociated_of_size (exact)",
                    cap: EXACT_SEARCH_CAP,
                    got: a.len(),
                });
            }
            let mut chosen: Vec<Element> = Vec::new();
            if exact_search(a, l, 0, &mut chosen)? {
                GSet::from_elements(a.spec().clone(), chosen).map(Some)
            } else {
                Ok(None)
            }
        }
    }
}

fn exact_search(a: &GSet, l: usize, from: usize, chosen: &mut Vec<Element>) -> Result<bool> {
    if chosen.len() == l {
        return Ok(true);
    }
    let remaining = a.len() - from;
    if chosen.len() + remaining < l {
        return Ok(false);
    }
    let spec = a.spec();
    let x = &a.elements()[from];
    let searcher = SpanSearcher::build(spec, chosen, MITM_CAP)?;
    if searcher.query(x, false)?.is_none() {
        chosen.push(x.clone());
        if exact_search(a, l, from + 1, chosen)? {
            return Ok(true);
        }
        chosen.pop();
    }
    exact_search(a, l, from + 1, chosen)
}

/// All values of signed sums over `L`: `{Σ σ_x·x : σ ∈ {-1,0,1}^L}`.
///
/// Always contains the identity and is closed under negation. Capped at
/// [`SPAN_ENUM_CAP`] elements of `L`; use [`span_contains`] for membership
/// queries on larger supports.
pub fn span_enumerate(l: &GSet) -> Result<GSet> {
    if l.len() > SPAN_ENUM_CAP {
        return Err(Error::Resource {
            what: "span_enumerate (use span_contains for membership queries)",
            cap: SPAN_ENUM_CAP,
            got: l.len(),
        });
    }
    let spec = l.spec();
    let mut span = GSet::from_elements(spec.clone(), vec![spec.zero()])?;
    for x in l.iter() {
        let x_set = GSet::from_elements(spec.clone(), vec![x.clone()])?;
        let plus = crate::setops::sumset(&span, &x_set)?;
        let minus = crate::setops::sumset(&span, &x_set.negate())?;
        span = span.union(&plus)?.union(&minus)?;
    }
    Ok(span)
}

/// Membership certificate: the least sign vector over `L` evaluating to `x`,
/// or `None` if `x` is outside the span.
pub fn span_contains(l: &GSet, x: &Element) -> Result<Option<SignVector>> {
    let spec = l.spec();
    let x = canon(x.coords(), spec)?;
    if x.is_zero() {
        return Ok(Some(SignVector::zero(l.elements().to_vec())));
    }
    let searcher = SpanSearcher::build(spec, l.elements(), MITM_CAP)?;
    searcher.query(&x, false)
}

/// `{a ∈ A : a ∈ Span(L)}`, sharing one meet-in-the-middle table across all
/// membership queries.
pub fn span_intersect(l: &GSet, a: &GSet) -> Result<GSet> {
    if l.spec() != a.spec() {
        return Err(Error::SpecMismatch);
    }
    let spec = a.spec();
    let searcher = SpanSearcher::build(spec, l.elements(), MITM_CAP)?;
    let mut hits = Vec::new();
    for x in a.iter() {
        if x.is_zero() || searcher.query(x, false)?.is_some() {
            hits.push(x.clone());
        }
    }
    GSet::from_elements(spec.clone(), hits)
}
