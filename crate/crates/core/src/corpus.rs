//! Deterministic set generators for exercising the pipelines: arithmetic
//! progressions, geometric (dissociated) sets, seeded random boxes, greedy
//! Sidon sets, and unions of subgroup cosets in `Z_2^k`. Random kinds are
//! driven by a ChaCha8 keystream, so a fixed seed regenerates bytes exactly.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::setops::GSet;

/// `{s, s+d, ..., s+(n-1)d}` over `Z`.
pub fn gen_ap(n: usize, d: i64, s: i64) -> Result<GSet> {
    if n < 1 {
        return Err(Error::InvalidParameter("ap: n must be >= 1".into()));
    }
    if d == 0 && n > 1 {
        return Err(Error::InvalidParameter(
            "ap: zero step collapses the set".into(),
        ));
    }
    Ok(GSet::from_ints((0..n as i64).map(|i| s + i * d)))
}

/// `{1, 2, 4, ..., 2^{n-1}}` over `Z`.
pub fn gen_geo(n: usize) -> Result<GSet> {
    if !(1..=62).contains(&n) {
        return Err(Error::InvalidParameter("geo: n must lie in 1..=62".into()));
    }
    Ok(GSet::from_ints((0..n as u32).map(|i| 1i64 << i)))
}

/// `n` distinct uniform points of `[0, w)^dim` over `Z^dim`.
pub fn gen_box_random(n: usize, w: i64, dim: usize, seed: u64) -> Result<GSet> {
    if n < 1 || w < 1 || dim < 1 {
        return Err(Error::InvalidParameter(
            "box_random: need n >= 1, w >= 1, dim >= 1".into(),
        ));
    }
    let capacity = (w as u128).checked_pow(dim as u32);
    if capacity.map(|c| (n as u128) > c).unwrap_or(false) {
        return Err(Error::InvalidParameter(format!(
            "box_random: cannot place {n} distinct points in a box of {w}^{dim}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: BTreeSet<Vec<i64>> = BTreeSet::new();
    while points.len() < n {
        let p: Vec<i64> = (0..dim).map(|_| rng.random_range(0..w)).collect();
        points.insert(p);
    }
    GSet::from_raw(GroupSpec::integers(dim)?, points)
}

/// Greedy Sidon set of size `n` over `Z`, scanning candidates `0, 1, 2, ...`
/// and keeping those whose pairwise sums stay distinct.
pub fn gen_sidon_greedy(n: usize) -> Result<GSet> {
    if n < 1 {
        return Err(Error::InvalidParameter(
            "sidon_greedy: n must be >= 1".into(),
        ));
    }
    let mut chosen: Vec<i64> = Vec::with_capacity(n);
    let mut sums: BTreeSet<i64> = BTreeSet::new();
    let mut x = 0i64;
    while chosen.len() < n {
        let fresh: Vec<i64> = chosen.iter().map(|&a| a + x).chain([2 * x]).collect();
        let mut distinct = fresh.iter().all(|s| !sums.contains(s));
        if distinct {
            // sums within the candidate batch are distinct already: a + x
            // ranges over distinct values and 2x differs from each
            distinct = fresh.iter().collect::<BTreeSet<_>>().len() == fresh.len();
        }
        if distinct {
            sums.extend(fresh);
            chosen.push(x);
        }
        x += 1;
    }
    Ok(GSet::from_ints(chosen))
}

/// Union of `t` distinct cosets of a seeded random subgroup of rank `h`
/// inside `Z_2^k`.
pub fn gen_subgroup_union(k: usize, h: usize, t: usize, seed: u64) -> Result<GSet> {
    if !(1..=20).contains(&k) {
        return Err(Error::InvalidParameter(
            "subgroup_union: k must lie in 1..=20".into(),
        ));
    }
    if h > k {
        return Err(Error::InvalidParameter(
            "subgroup_union: subgroup rank h cannot exceed k".into(),
        ));
    }
    let cosets_available = 1u64 << (k - h);
    if t < 1 || t as u64 > cosets_available {
        return Err(Error::InvalidParameter(format!(
            "subgroup_union: need 1 <= t <= 2^(k-h) = {cosets_available}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // random rank-h basis over F_2, kept as a row-reduced echelon set
    let mut basis: Vec<u32> = Vec::new();
    while basis.len() < h {
        let mut v = (rng.random::<u32>()) & ((1u32 << k) - 1);
        for &b in &basis {
            let pivot = 1u32 << (31 - b.leading_zeros());
            if v & pivot != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
        }
    }
    let subgroup: Vec<u32> = (0..1u32 << h)
        .map(|mask| {
            let mut v = 0u32;
            for (i, &b) in basis.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    v ^= b;
                }
            }
            v
        })
        .collect();
    // distinct cosets, identified by their minimal member
    let mut reps: Vec<u32> = Vec::new();
    let mut seen_cosets: BTreeSet<u32> = BTreeSet::new();
    while reps.len() < t {
        let r = (rng.random::<u32>()) & ((1u32 << k) - 1);
        let min_member = subgroup.iter().map(|&s| s ^ r).min().unwrap();
        if seen_cosets.insert(min_member) {
            reps.push(r);
        }
    }
    let spec = GroupSpec::cyclic_product(&vec![2u64; k])?;
    let mut raw = Vec::with_capacity(t << h);
    for r in reps {
        for &s in &subgroup {
            let v = r ^ s;
            raw.push((0..k).map(|i| ((v >> i) & 1) as i64).collect::<Vec<_>>());
        }
    }
    GSet::from_raw(spec, raw)
}
