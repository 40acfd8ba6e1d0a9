//! Iterative peeling decomposition: strip disjoint dissociated layers of a
//! fixed size `l` from a set until none can be found, leaving a residual
//! whose dissociated subsets are small. The Fourier-side consequence, that
//! the dual-norm distance between the set and its residual is at most the
//! sum of the layer norms, is certified numerically, never assumed.

use crate::dissociation::{find_dissociated_of_size, SearchMode};
use crate::error::{Error, Result};
use crate::fourier::{dft_indicator, lp_dual_norm, DualFunction};
use crate::setops::GSet;

/// The layers and residual of one peeling run.
///
/// Layers are pairwise disjoint, each of size exactly `l`, each dissociated;
/// together with the residual they partition the source set, so the number
/// of layers is at most `|A| / l`. In `Greedy` mode the terminal guarantee
/// is that the greedy maximal dissociated subset of the residual has size
/// below `l`; in `Exact` mode no dissociated subset of size `l` exists in
/// the residual at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelingTrace {
    pub l: usize,
    pub layers: Vec<GSet>,
    pub residual: GSet,
    pub mode: SearchMode,
    pub source: GSet,
}

impl PeelingTrace {
    /// Number of peeled layers.
    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }
}

/// Peel disjoint dissociated layers of size `l` out of `A` until the sized
/// search returns nothing. Layers are chosen as the greedy prefix (or, in
/// `Exact` mode, the lexicographically least subset), so traces are
/// reproducible.
pub fn bourgain_peel(a: &GSet, l: usize, mode: SearchMode) -> Result<PeelingTrace> {
    if l < 1 {
        return Err(Error::InvalidParameter("layer size l must be >= 1".into()));
    }
    let mut remaining = a.clone();
    let mut layers = Vec::new();
    while let Some(layer) = find_dissociated_of_size(&remaining, l, mode)? {
        remaining = remaining.difference(&layer)?;
        layers.push(layer);
    }
    Ok(PeelingTrace {
        l,
        layers,
        residual: remaining,
        mode,
        source: a.clone(),
    })
}

/// Fourier-side error of a trace at exponent `p`:
/// `lhs = ‖1̂_A − 1̂_{A'}‖_{L^p}` and `layer_bound = Σ_i ‖1̂_{ℒ_i}‖_{L^p}`.
/// The triangle inequality guarantees `lhs <= layer_bound`; both sides are
/// computed independently so the guarantee can be checked, not assumed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeelErrorNorm {
    pub lhs: f64,
    pub layer_bound: f64,
}

/// Requires a fully finite spec; callers embed integer sets first.
pub fn peel_error_norm(trace: &PeelingTrace, p: f64) -> Result<PeelErrorNorm> {
    Ok(peel_error_norms(trace, &[p])?[0])
}

/// Same as [`peel_error_norm`] at several exponents, sharing one transform
/// pass over the trace.
pub fn peel_error_norms(trace: &PeelingTrace, ps: &[f64]) -> Result<Vec<PeelErrorNorm>> {
    if !trace.source.spec().is_fully_finite() {
        return Err(Error::RequiresEmbedding);
    }
    let f_source = dft_indicator(&trace.source)?;
    let f_residual = dft_indicator(&trace.residual)?;
    let difference = f_source.sub(&f_residual)?;
    let layer_transforms: Vec<DualFunction> = trace
        .layers
        .iter()
        .map(dft_indicator)
        .collect::<Result<_>>()?;
    ps.iter()
        .map(|&p| {
            let lhs = lp_dual_norm(&difference, p)?;
            let mut layer_bound = 0.0;
            for f_layer in &layer_transforms {
                layer_bound += lp_dual_norm(f_layer, p)?;
            }
            Ok(PeelErrorNorm { lhs, layer_bound })
        })
        .collect()
}
