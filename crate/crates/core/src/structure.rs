//! The two structure pipelines with runtime-verified inequality chains.
//!
//! `energy_structure`: from an energy lower bound `E(A) >= c|A|^3`, peel
//! dissociated layers adaptively until the Fourier-side error
//! `‖1̂_A − 1̂_{A'}‖_{L^p}` (at `p = 2 + ln|A|`) drops below the threshold
//! `c^{(p-2)/2p}|A|^{(p-1)/p}/2`. Once that measured inequality holds, the
//! rest is theorem-forced: the residual satisfies
//! `|A'| >= c^{(p-2)/(2(p-1))} 2^{-p/(p-1)} |A| >= c^{1/2}|A|/4`, and the
//! greedy maximal dissociated subset of the residual spans it, so
//! `|A ∩ Span(ℒ)| >= |A'|`.
//!
//! `cover_structure`: with doubling `|A+A| <= K|A|`, the greedy maximal
//! dissociated subset of `A` spans all of `A`; the function
//! `f = 1_{A+A} ∗ 1_{-A}` ties `|ℒ|` to `K log|A|`, and its exact and
//! Fourier-side diagnostics are reported and bounded.
//!
//! Natural logarithms throughout; base changes only move the hidden
//! constants, and reports record the exponent actually used.

use num_traits::ToPrimitive;

use crate::dissociation::{max_dissociated_greedy, span_intersect, SearchMode};
use crate::error::{Error, Result};
use crate::fourier::{
    dft_with_cap, indicator, lp_dual_norm, MarginReport, DEFAULT_DFT_CAP, NAIVE_DFT_CAP,
};
use crate::group::{embed_to_torus, GroupSpec, TorusEmbedding};
use crate::peeling::{bourgain_peel, PeelingTrace};
use crate::setops::{
    additive_energy, convolve_indicators, doubling, sumset, EnergyCertificate, GSet, Rational,
};

use num_complex::Complex64;
use std::collections::BTreeMap;

/// The explicit thresholds of the energy pipeline at parameters `(c, p, n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Error budget for the peeling step: `c^{(p-2)/2p} n^{(p-1)/p} / 2`.
    pub rhs_lemma_error: f64,
    /// Lower bound on `‖1̂_A‖_{L^p}` forced by the energy: twice the above.
    pub lower_1a: f64,
    /// Residual size bound: `c^{(p-2)/(2(p-1))} 2^{-p/(p-1)} n`.
    pub residual_lb: f64,
}

/// Evaluate the pipeline thresholds. Requires `0 < c <= 1`, `p > 2`,
/// `n >= 1`. Always satisfies `residual_lb >= c^{1/2} n / 4`.
pub fn structure_thresholds(c: Rational, p: f64, n: usize) -> Result<Thresholds> {
    let c_f = c
        .to_f64()
        .ok_or_else(|| Error::InvalidParameter("c out of f64 range".into()))?;
    if !(c_f > 0.0 && c <= Rational::new(1, 1)) {
        return Err(Error::InvalidParameter(format!(
            "c = {c} must lie in (0, 1]"
        )));
    }
    if p <= 2.0 || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "p = {p} must be finite and > 2"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let n_f = n as f64;
    let rhs_lemma_error = c_f.powf((p - 2.0) / (2.0 * p)) * n_f.powf((p - 1.0) / p) / 2.0;
    let lower_1a = 2.0 * rhs_lemma_error;
    let residual_lb = c_f.powf((p - 2.0) / (2.0 * (p - 1.0))) * 2f64.powf(-p / (p - 1.0)) * n_f;
    debug_assert!(residual_lb >= c_f.sqrt() * n_f / 4.0 * (1.0 - 1e-12));
    Ok(Thresholds {
        rhs_lemma_error,
        lower_1a,
        residual_lb,
    })
}

/// Knobs for [`energy_structure`].
#[derive(Debug, Clone)]
pub struct StructureOptions {
    /// Use this `c` instead of the computed energy ratio. Must not exceed
    /// the computed value (the theorem needs `E(A) >= c|A|^3` to be true).
    pub c_override: Option<Rational>,
    /// Scale on the initial layer size `l = ceil(l_const * ln|A| / c)`.
    pub l_const: f64,
    /// Start from this layer size instead of the formula above.
    pub initial_l: Option<usize>,
    /// Double `l` until the measured error drops below the threshold.
    pub adaptive: bool,
    /// Layer search mode for the peeling step.
    pub mode: SearchMode,
    /// Group-order cap for the Fourier side.
    pub dft_cap: usize,
    /// Headroom multiplier passed to the torus embedding.
    pub headroom: u64,
}

impl Default for StructureOptions {
    fn default() -> Self {
        StructureOptions {
            c_override: None,
            l_const: 1.0,
            initial_l: None,
            adaptive: true,
            mode: SearchMode::Greedy,
            dft_cap: DEFAULT_DFT_CAP,
            headroom: 1,
        }
    }
}

/// Where the Fourier side of a pipeline was evaluated.
#[derive(Debug, Clone)]
enum FourierRoute {
    /// The input spec is fully finite and within the cap.
    Direct,
    /// Integer coordinates were embedded into this torus.
    Embedded(Box<TorusEmbedding>),
    /// No transform possible within the cap; certification is skipped.
    Unavailable,
}

fn pick_route(a: &GSet, dft_cap: usize, headroom: u64) -> Result<FourierRoute> {
    let spec = a.spec();
    if spec.is_fully_finite() {
        if transformable(spec, dft_cap) {
            return Ok(FourierRoute::Direct);
        }
        return Ok(FourierRoute::Unavailable);
    }
    let (_, embedding) = embed_to_torus(a, headroom)?;
    if transformable(embedding.target_spec(), dft_cap) {
        Ok(FourierRoute::Embedded(Box::new(embedding)))
    } else {
        Ok(FourierRoute::Unavailable)
    }
}

fn transformable(spec: &GroupSpec, cap: usize) -> bool {
    let Some(order) = spec.order() else {
        return false;
    };
    if order > cap as u128 {
        return false;
    }
    let pow2 = spec.factors().iter().all(|f| match f {
        crate::group::Factor::Mod(m) => m.is_power_of_two(),
        crate::group::Factor::Z => false,
    });
    pow2 || order <= NAIVE_DFT_CAP as u128
}

/// Report of one energy-pipeline run.
#[derive(Debug, Clone)]
pub struct StructureReport {
    pub input: GSet,
    pub cert: EnergyCertificate,
    /// The `c` the certificate chain was evaluated with.
    pub c_used: Rational,
    /// `2 + ln|A|`.
    pub p: f64,
    /// Layer sizes attempted by the adaptive loop, in order.
    pub l_trajectory: Vec<usize>,
    pub trace: PeelingTrace,
    /// Greedy maximal dissociated subset of the residual.
    pub span_set: GSet,
    /// `A ∩ Span(span_set)`.
    pub intersect: GSet,
    pub intersect_size: usize,
    /// Measured `‖1̂_A − 1̂_{A'}‖_{L^p}`; `None` when no transform fits the cap.
    pub error_lhs: Option<f64>,
    /// Threshold `c^{(p-2)/2p}|A|^{(p-1)/p}/2`.
    pub error_rhs: f64,
    /// Residual size bound implied when certified.
    pub residual_lb: f64,
    pub certified: bool,
    /// Torus the Fourier side was evaluated on, when an embedding was used.
    pub embedded_spec: Option<GroupSpec>,
}

/// Run the energy pipeline on `A` (at least 2 elements).
///
/// Layer size starts at `ceil(l_const * ln|A| / c)` and doubles (when
/// `adaptive`) until the measured peeling error is within budget; once no
/// layer of the current size exists the error is exactly zero, so the loop
/// always terminates. On every certified report the chain
/// `intersect_size >= |A'| >= residual_lb >= c^{1/2}|A|/4` is asserted; a
/// violation would be a bug, not a data property.
pub fn energy_structure(a: &GSet, opts: &StructureOptions) -> Result<StructureReport> {
    let n = a.len();
    if n < 2 {
        return Err(Error::Precondition(
            "energy_structure requires at least 2 elements".into(),
        ));
    }
    let cert = additive_energy(a)?;
    let c_used = match opts.c_override {
        None => cert.c,
        Some(c) => {
            if c > cert.c || c == Rational::new(0, 1) {
                return Err(Error::InvalidParameter(format!(
                    "c_override {c} must lie in (0, {}]",
                    cert.c
                )));
            }
            c
        }
    };
    let p = 2.0 + (n as f64).ln();
    let thresholds = structure_thresholds(c_used, p, n)?;
    let c_f = c_used.to_f64().expect("validated above");
    let mut l = match opts.initial_l {
        Some(l) => l.max(1),
        None => ((opts.l_const * (n as f64).ln() / c_f).ceil() as usize).max(1),
    };

    let route = pick_route(a, opts.dft_cap, opts.headroom)?;
    // Transform of the source indicator is loop-invariant; compute it once.
    let f_source = match &route {
        FourierRoute::Direct => Some(dft_with_cap(&indicator(a), a.spec(), opts.dft_cap)?),
        FourierRoute::Embedded(embedding) => {
            let embedded = embedding.embed_set(a)?;
            Some(dft_with_cap(
                &indicator(&embedded),
                embedding.target_spec(),
                opts.dft_cap,
            )?)
        }
        FourierRoute::Unavailable => None,
    };

    let mut l_trajectory = Vec::new();
    let (trace, error_lhs, certified) = loop {
        l_trajectory.push(l);
        let trace = bourgain_peel(a, l, opts.mode)?;
        let lhs = match (&route, &f_source) {
            (FourierRoute::Direct, Some(f_a)) => {
                let f_res = dft_with_cap(&indicator(&trace.residual), a.spec(), opts.dft_cap)?;
                Some(lp_dual_norm(&f_a.sub(&f_res)?, p)?)
            }
            (FourierRoute::Embedded(embedding), Some(f_a)) => {
                let res = embedding.embed_set(&trace.residual)?;
                let f_res = dft_with_cap(&indicator(&res), embedding.target_spec(), opts.dft_cap)?;
                Some(lp_dual_norm(&f_a.sub(&f_res)?, p)?)
            }
            _ => None,
        };
        match lhs {
            None => break (trace, None, false),
            Some(v) if v <= thresholds.rhs_lemma_error => break (trace, Some(v), true),
            Some(v) if !opts.adaptive => break (trace, Some(v), false),
            Some(_) => {
                l = l.checked_mul(2).expect("layer size overflow");
            }
        }
    };

    let span_set = max_dissociated_greedy(&trace.residual)?;
    let intersect = span_intersect(&span_set, a)?;
    assert!(
        trace.residual.is_subset_of(&intersect),
        "maximal dissociated subset failed to span the residual"
    );
    if certified {
        assert!(
            trace.residual.len() as f64 >= thresholds.residual_lb,
            "certified residual {} fell below the bound {}",
            trace.residual.len(),
            thresholds.residual_lb
        );
    }
    let embedded_spec = match &route {
        FourierRoute::Embedded(embedding) => Some(embedding.target_spec().clone()),
        _ => None,
    };
    let intersect_size = intersect.len();
    Ok(StructureReport {
        input: a.clone(),
        cert,
        c_used,
        p,
        l_trajectory,
        trace,
        span_set,
        intersect,
        intersect_size,
        error_lhs,
        error_rhs: thresholds.rhs_lemma_error,
        residual_lb: thresholds.residual_lb,
        certified,
        embedded_spec,
    })
}

/// Exact and Fourier-side diagnostics of `f = 1_{A+A} ∗ 1_{-A}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FDiagnostics {
    /// `min_{a ∈ A} f(a)`; always exactly `|A|`.
    pub min_over_a: u64,
    /// `‖f‖_∞`; at most `|A|`.
    pub sup_norm: u64,
    /// `‖f‖_{ℓ¹} = |A| * |A+A|`, exact.
    pub l1_mass: u128,
    /// `‖f̂‖_{L¹(μ)}`; `None` when no transform fits the cap.
    pub dual_l1: Option<f64>,
    /// Its bound `√K |A|`.
    pub dual_l1_bound: f64,
}

/// Report of one doubling-pipeline run.
#[derive(Debug, Clone)]
pub struct CoverReport {
    pub input: GSet,
    pub k: Rational,
    /// Greedy maximal dissociated subset of `A`.
    pub span_set: GSet,
    /// Every element of `A` verified in `Span(span_set)`; always true.
    pub covered: bool,
    /// `|span_set| / (K ln|A|)`.
    pub bound_ratio: f64,
    pub f_diag: FDiagnostics,
}

fn f_convolution(a: &GSet) -> Result<(GSet, BTreeMap<crate::group::Element, u64>)> {
    let s = sumset(a, a)?;
    let f = convolve_indicators(&s, &a.negate())?;
    Ok((s, f))
}

fn dual_l1_of_map(
    f: &BTreeMap<crate::group::Element, u64>,
    a: &GSet,
    cap: usize,
) -> Result<Option<f64>> {
    let spec = a.spec();
    let complexify = |m: &BTreeMap<crate::group::Element, u64>| -> BTreeMap<_, _> {
        m.iter()
            .map(|(e, &v)| (e.clone(), Complex64::new(v as f64, 0.0)))
            .collect()
    };
    if spec.is_fully_finite() {
        if !transformable(spec, cap) {
            return Ok(None);
        }
        let transformed = dft_with_cap(&complexify(f), spec, cap)?;
        return Ok(Some(lp_dual_norm(&transformed, 1.0)?));
    }
    let (_, embedding) = embed_to_torus(a, 1)?;
    if !transformable(embedding.target_spec(), cap) {
        return Ok(None);
    }
    let mut embedded = BTreeMap::new();
    for (e, &v) in f {
        embedded.insert(embedding.embed_element(e)?, Complex64::new(v as f64, 0.0));
    }
    let transformed = dft_with_cap(&embedded, embedding.target_spec(), cap)?;
    Ok(Some(lp_dual_norm(&transformed, 1.0)?))
}

/// Run the doubling pipeline on `A` (at least 2 elements): compute `K`,
/// extract the greedy maximal dissociated subset, verify that its span
/// covers `A` elementwise, and report the `f = 1_{A+A} ∗ 1_{-A}`
/// diagnostics.
pub fn cover_structure(a: &GSet) -> Result<CoverReport> {
    let n = a.len();
    if n < 2 {
        return Err(Error::Precondition(
            "cover_structure requires at least 2 elements".into(),
        ));
    }
    let k = doubling(a)?;
    let span_set = max_dissociated_greedy(a)?;
    let covered = span_intersect(&span_set, a)? == *a;
    debug_assert!(
        covered,
        "maximal dissociated subset failed to span its source"
    );

    let (s, f) = f_convolution(a)?;
    let min_over_a = a
        .iter()
        .map(|x| f.get(x).copied().unwrap_or(0))
        .min()
        .expect("nonempty");
    assert_eq!(min_over_a as usize, n, "f(a) = |A| is forced for a in A");
    let sup_norm = f.values().copied().max().expect("nonempty");
    assert!(sup_norm as usize <= n);
    let l1_mass: u128 = f.values().map(|&v| v as u128).sum();
    assert_eq!(l1_mass, n as u128 * s.len() as u128);

    let k_f = k.to_f64().expect("desk-scale rational");
    let dual_l1 = dual_l1_of_map(&f, a, DEFAULT_DFT_CAP)?;
    let dual_l1_bound = k_f.sqrt() * n as f64;
    let bound_ratio = span_set.len() as f64 / (k_f * (n as f64).ln());
    Ok(CoverReport {
        input: a.clone(),
        k,
        span_set,
        covered,
        bound_ratio,
        f_diag: FDiagnostics {
            min_over_a,
            sup_norm,
            l1_mass,
            dual_l1,
            dual_l1_bound,
        },
    })
}

/// Margin report for the dual-norm chain of `f = 1_{A+A} ∗ 1_{-A}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub p_prime: f64,
    /// Conjugate exponent `p = p'/(p'-1)`.
    pub p: f64,
    /// `‖f̂‖_{L¹} <= √K |A|`.
    pub l1: MarginReport,
    /// `Σ f(x)²`, exact.
    pub l2_sq: u128,
    /// Its exact bound `K|A|³ = |A+A| |A|²`.
    pub l2_sq_bound: u128,
    /// Parseval cross-check: `‖f̂‖_{L²}²` against the exact `Σ f(x)²`.
    pub parseval: MarginReport,
    /// `‖f̂‖_{L^{p'}} <= √K |A|^{(p'+1)/2}`, the target interpolation bound
    /// with the exponent linear in `p'`. This sharper form can fail in the
    /// interior of `(1, 2)`; see `lp_logconvex` for the bound the endpoint
    /// estimates actually guarantee.
    pub lp: MarginReport,
    /// `‖f̂‖_{L^{p'}} <= √K |A|^{2 - 1/p'}`: what log-convexity between the
    /// L¹ and L² endpoint bounds guarantees (the exponent is the convex
    /// combination in `1/p'`). Holds by theorem; `lp` does not in general.
    pub lp_logconvex: MarginReport,
    /// Observed `‖f‖_{ℓ²(ℒ)} / (√p ‖f̂‖_{L^{p'}})` for the greedy maximal
    /// dissociated `ℒ ⊆ A`, the quantity the duality-plus-Rudin step
    /// bounds by an absolute constant.
    pub pairing_constant: f64,
    pub span_size: usize,
}

/// Verify the dual-norm chain for `f = 1_{A+A} ∗ 1_{-A}` at exponent
/// `p' ∈ (1, 2]`.
pub fn doubling_chain_check(a: &GSet, p_prime: f64) -> Result<ChainReport> {
    if !(p_prime > 1.0 && p_prime <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "p' = {p_prime} must lie in (1, 2]"
        )));
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::Precondition(
            "doubling_chain_check requires at least 2 elements".into(),
        ));
    }
    let p = p_prime / (p_prime - 1.0);
    let k = doubling(a)?;
    let k_f = k.to_f64().expect("desk-scale rational");
    let (s, f) = f_convolution(a)?;

    let l2_sq: u128 = f.values().map(|&v| (v as u128) * (v as u128)).sum();
    let l2_sq_bound = s.len() as u128 * (n as u128) * (n as u128);

    // One transform serves every norm in the chain.
    let spec = a.spec();
    let transformed = if spec.is_fully_finite() {
        dft_with_cap(
            &f.iter()
                .map(|(e, &v)| (e.clone(), Complex64::new(v as f64, 0.0)))
                .collect(),
            spec,
            DEFAULT_DFT_CAP,
        )?
    } else {
        let (_, embedding) = embed_to_torus(a, 1)?;
        let mut embedded = BTreeMap::new();
        for (e, &v) in &f {
            embedded.insert(embedding.embed_element(e)?, Complex64::new(v as f64, 0.0));
        }
        dft_with_cap(&embedded, embedding.target_spec(), DEFAULT_DFT_CAP)?
    };
    let dual_l1 = lp_dual_norm(&transformed, 1.0)?;
    let dual_l2 = lp_dual_norm(&transformed, 2.0)?;
    let dual_lp = lp_dual_norm(&transformed, p_prime)?;
    let n_f = n as f64;

    let span_set = max_dissociated_greedy(a)?;
    let f_l2_on_span: f64 = span_set
        .iter()
        .map(|x| {
            let v = f.get(x).copied().unwrap_or(0) as f64;
            v * v
        })
        .sum::<f64>()
        .sqrt();

    Ok(ChainReport {
        p_prime,
        p,
        l1: MarginReport {
            lhs: dual_l1,
            rhs: k_f.sqrt() * n_f,
        },
        l2_sq,
        l2_sq_bound,
        parseval: MarginReport {
            lhs: dual_l2 * dual_l2,
            rhs: l2_sq as f64,
        },
        lp: MarginReport {
            lhs: dual_lp,
            rhs: k_f.sqrt() * n_f.powf((p_prime + 1.0) / 2.0),
        },
        lp_logconvex: MarginReport {
            lhs: dual_lp,
            rhs: k_f.sqrt() * n_f.powf(2.0 - 1.0 / p_prime),
        },
        pairing_constant: f_l2_on_span / (p.sqrt() * dual_lp),
        span_size: span_set.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_collapse_near_p_two() {
        let n = 100usize;
        let t = structure_thresholds(Rational::new(1, 1), 2.0 + 1e-9, n).unwrap();
        assert!((t.lower_1a - (n as f64).sqrt()).abs() < 1e-5);
        assert!((t.residual_lb - n as f64 / 4.0).abs() < 1e-5);
    }

    #[test]
    fn thresholds_frozen_example() {
        // c = 1/4, p = 6, n = 100:
        // rhs = (1/4)^{1/3} * 100^{5/6} / 2, evaluated independently via
        // exp/ln composition: 14.6200886911...
        let t = structure_thresholds(Rational::new(1, 4), 6.0, 100).unwrap();
        let independent =
            ((1.0f64 / 3.0) * 0.25f64.ln() + (5.0 / 6.0) * 100f64.ln() - 2f64.ln()).exp();
        assert!((t.rhs_lemma_error - independent).abs() <= 1e-9 * independent);
        assert!((t.rhs_lemma_error - 14.6200886911).abs() < 1e-9);
    }

    #[test]
    fn thresholds_large_p_limit() {
        for c in [
            Rational::new(1, 1),
            Rational::new(1, 2),
            Rational::new(3, 100),
        ] {
            let c_f = c.to_f64().unwrap();
            let t = structure_thresholds(c, 1e9, 50).unwrap();
            // residual_lb -> c^{1/2} n / 2 as p -> infinity
            assert!((t.residual_lb - c_f.sqrt() * 25.0).abs() < 1e-5);
            assert!(t.residual_lb >= c_f.sqrt() * 50.0 / 4.0);
        }
    }

    #[test]
    fn thresholds_dominate_quarter_bound() {
        for num in 1..=20u128 {
            for p10 in [21u32, 25, 30, 40, 80, 200] {
                let c = Rational::new(num, 20);
                let p = p10 as f64 / 10.0;
                let t = structure_thresholds(c, p, 64).unwrap();
                let c_f = c.to_f64().unwrap();
                assert!(
                    t.residual_lb >= c_f.sqrt() * 64.0 / 4.0 * (1.0 - 1e-12),
                    "c={c} p={p}"
                );
            }
        }
    }

    #[test]
    fn thresholds_validation() {
        assert!(structure_thresholds(Rational::new(0, 1), 4.0, 10).is_err());
        assert!(structure_thresholds(Rational::new(3, 2), 4.0, 10).is_err());
        assert!(structure_thresholds(Rational::new(1, 2), 2.0, 10).is_err());
    }

    #[test]
    fn pipeline_on_pair() {
        let a = GSet::from_ints([0, 1]);
        let report = energy_structure(&a, &StructureOptions::default()).unwrap();
        assert_eq!(report.cert.energy, 6);
        assert_eq!(report.c_used, Rational::new(3, 4));
        assert!(report.certified);
        assert!(report.intersect_size as f64 >= report.c_used.to_f64().unwrap().sqrt() * 2.0 / 4.0);
        assert_eq!(report.span_set, GSet::from_ints([1]));
        assert_eq!(report.intersect_size, 2);
    }

    #[test]
    fn pipeline_on_dissociated_set_stalls_immediately() {
        let a = GSet::from_ints([1, 2, 4, 8, 16, 32, 64, 128]);
        let report = energy_structure(&a, &StructureOptions::default()).unwrap();
        assert!(report.certified);
        assert_eq!(report.trace.layer_count(), 0);
        assert_eq!(report.error_lhs, Some(0.0));
        assert_eq!(report.trace.residual, a);
        assert_eq!(report.intersect_size, a.len());
    }

    #[test]
    fn pipeline_on_interval_certifies() {
        let a = GSet::from_ints(1..=16);
        let report = energy_structure(&a, &StructureOptions::default()).unwrap();
        assert!(report.certified);
        assert_eq!(report.cert.energy, 2736);
        assert!(report.span_set.is_subset_of(&report.trace.residual));
        assert!(report.intersect_size >= report.trace.residual.len());
        assert!(report.trace.residual.len() as f64 >= report.residual_lb);
        // overall claim: a logarithmic number of generators
        assert!(report.span_set.len() <= 16);
    }

    #[test]
    fn pipeline_on_mixed_spec_embeds_the_integer_factor() {
        let spec = crate::group::GroupSpec::new(vec![
            crate::group::Factor::Z,
            crate::group::Factor::Mod(4),
        ])
        .unwrap();
        let a = GSet::from_raw(
            spec,
            (0..12i64).map(|i| vec![3 * i + 1, i % 4]).collect::<Vec<_>>(),
        )
        .unwrap();
        let report = energy_structure(&a, &StructureOptions::default()).unwrap();
        assert!(report.certified);
        let embedded = report.embedded_spec.as_ref().unwrap().to_string();
        assert!(embedded.ends_with("x Z_4"), "{embedded}");
        assert!(report.intersect_size >= report.trace.residual.len());

        let cover = cover_structure(&a).unwrap();
        assert!(cover.covered);
        assert_eq!(cover.f_diag.min_over_a as usize, a.len());
        let dual_l1 = cover.f_diag.dual_l1.unwrap();
        assert!(dual_l1 <= cover.f_diag.dual_l1_bound * (1.0 + 1e-6));
    }

    #[test]
    fn pipeline_without_transform_is_uncertified_but_useful() {
        // non-power-of-two order beyond the naive-path cap: no transform fits
        let spec = GroupSpec::cyclic(5000).unwrap();
        let a = GSet::from_raw(spec, (1..=10i64).map(|i| vec![i * 7]).collect::<Vec<_>>()).unwrap();
        let report = energy_structure(&a, &StructureOptions::default()).unwrap();
        assert!(!report.certified);
        assert_eq!(report.error_lhs, None);
        assert!(report.intersect_size >= report.trace.residual.len());
        assert_eq!(report.l_trajectory.len(), 1);
    }

    #[test]
    fn pipeline_rejects_singletons_and_bad_override() {
        let single = GSet::from_ints([3]);
        assert!(energy_structure(&single, &StructureOptions::default()).is_err());

        let a = GSet::from_ints([0, 1]);
        let opts = StructureOptions {
            c_override: Some(Rational::new(9, 10)), // computed c is 3/4
            ..Default::default()
        };
        assert!(energy_structure(&a, &opts).is_err());
    }

    #[test]
    fn pipeline_with_weaker_override_still_certifies() {
        let a = GSet::from_ints(1..=16);
        let opts = StructureOptions {
            c_override: Some(Rational::new(1, 2)),
            ..Default::default()
        };
        let report = energy_structure(&a, &opts).unwrap();
        assert_eq!(report.c_used, Rational::new(1, 2));
        assert!(report.certified);
    }

    #[test]
    fn cover_on_interval_sixteen() {
        let a = GSet::from_ints(1..=16);
        let report = cover_structure(&a).unwrap();
        assert_eq!(report.k, Rational::new(31, 16));
        assert_eq!(report.span_set, GSet::from_ints([1, 2, 4, 8, 16]));
        assert!(report.covered);
        assert_eq!(report.f_diag.min_over_a, 16);
        assert!(report.f_diag.sup_norm <= 16);
        assert_eq!(report.f_diag.l1_mass, 16 * 31);
        let dual_l1 = report.f_diag.dual_l1.unwrap();
        assert!(dual_l1 <= report.f_diag.dual_l1_bound * (1.0 + 1e-6));
    }

    #[test]
    fn cover_on_pair() {
        let a = GSet::from_ints([0, 1]);
        let report = cover_structure(&a).unwrap();
        assert_eq!(report.k, Rational::new(3, 2));
        assert_eq!(report.span_set, GSet::from_ints([1]));
        assert!(report.covered);
    }

    #[test]
    fn cover_on_dissociated_returns_everything() {
        let a = GSet::from_ints([1, 2, 4, 8, 16]);
        let report = cover_structure(&a).unwrap();
        assert_eq!(report.span_set, a);
        assert!(report.covered);
        assert!(report.bound_ratio.is_finite());
        assert_eq!(report.f_diag.min_over_a as usize, a.len());
    }

    #[test]
    fn chain_check_on_pair() {
        let a = GSet::from_ints([0, 1]);
        let report = doubling_chain_check(&a, 2.0).unwrap();
        assert!(report.l1.holds(1e-9));
        assert!(report.l2_sq <= report.l2_sq_bound);
        assert_eq!(report.l2_sq, 10); // f = 1,2,2,1 on {-1,0,1,2}
        assert_eq!(report.l2_sq_bound, 12);
        assert!(report.lp.holds(1e-6));
        assert!(report.lp_logconvex.holds(1e-9));
        assert!(
            report.parseval.holds(1e-9)
                && report.parseval.rhs <= report.parseval.lhs * (1.0 + 1e-9)
        );
        assert!(report.pairing_constant.is_finite() && report.pairing_constant > 0.0);
    }

    #[test]
    fn chain_check_exponent_validation() {
        let a = GSet::from_ints([0, 1]);
        assert!(doubling_chain_check(&a, 1.0).is_err());
        assert!(doubling_chain_check(&a, 2.5).is_err());
    }

    #[test]
    fn chain_l2_and_logconvex_hold_on_interval() {
        let a = GSet::from_ints(1..=64);
        let p = 2.0 + 64f64.ln();
        let p_prime = p / (p - 1.0);
        let report = doubling_chain_check(&a, p_prime).unwrap();
        assert!(report.l1.holds(1e-9));
        assert!(report.l2_sq <= report.l2_sq_bound);
        assert!(report.lp_logconvex.holds(1e-9));
        assert!(report.pairing_constant.is_finite());
    }

    #[test]
    fn scaling_sanity_c_at_least_inverse_k() {
        for a in [
            GSet::from_ints(1..=16),
            GSet::from_ints([0, 1, 5, 11, 13, 40]),
            GSet::from_ints([1, 2, 4, 8]),
        ] {
            let c = additive_energy(&a).unwrap().c;
            let k = doubling(&a).unwrap();
            assert!(c * k >= Rational::new(1, 1));
        }
    }
}
