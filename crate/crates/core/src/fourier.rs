//! Discrete Fourier transform over fully finite specs, `L^p` norms on the
//! dual under the Haar probability measure, and numerical verification of
//! the analytic inequalities the structure pipelines lean on: Parseval,
//! the Hausdorff-Young chain, log-convexity of dual norms, and an empirical
//! probe of Rudin's inequality on dissociated sets.
//!
//! The transform convention is `F(t) = Σ_x f(x) · exp(-2πi Σ_i t_i x_i / m_i)`
//! and dual norms average with mass `1/|G|` per character, so
//! `‖F‖_2^2 = Σ_x |f(x)|^2` exactly (Parseval) and `‖1̂_A‖_4^4` is the
//! additive energy of `A`.
//!
//! Power-of-two factors take a radix-2 FFT; other factors fall back to a
//! naive per-axis transform capped at [`NAIVE_DFT_CAP`] total group order.
//! Everything is `f64` with a relative error budget around `1e-9` at the
//! default cap, which is why every downstream check is
//! inequality-with-margin rather than equality.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dissociation::{is_dissociated, Strategy};
use crate::error::{Error, Result};
use crate::group::{canon, Element, Factor, GroupSpec};
use crate::setops::GSet;

/// Default cap on the group order for transforms.
pub const DEFAULT_DFT_CAP: usize = 1 << 20;
/// Cap on the group order when any factor is not a power of two.
pub const NAIVE_DFT_CAP: usize = 4096;

/// A complex-valued function on the dual of a fully finite group, indexed by
/// character index vectors in row-major order over the factor moduli.
#[derive(Debug, Clone)]
pub struct DualFunction {
    spec: GroupSpec,
    values: Vec<Complex64>,
}

impl DualFunction {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at a character index vector (componentwise mod the moduli).
    pub fn value_at(&self, t: &[i64]) -> Result<Complex64> {
        let e = canon(t, &self.spec)?;
        let moduli = factor_moduli(&self.spec);
        Ok(self.values[flat_index(e.coords(), &moduli)])
    }

    /// Pointwise difference of two dual functions over one spec.
    pub fn sub(&self, other: &DualFunction) -> Result<DualFunction> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(DualFunction {
            spec: self.spec.clone(),
            values,
        })
    }
}

fn factor_moduli(spec: &GroupSpec) -> Vec<usize> {
    spec.factors()
        .iter()
        .map(|f| match f {
            Factor::Mod(m) => *m as usize,
            Factor::Z => unreachable!("caller checked fully finite"),
        })
        .collect()
}

fn flat_index(coords: &[i64], moduli: &[usize]) -> usize {
    let mut idx = 0usize;
    for (&c, &m) in coords.iter().zip(moduli) {
        idx = idx * m + c as usize;
    }
    idx
}

/// Radix-2 forward FFT, in place.
fn fft_pow2(buf: &mut [Complex64]) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = -2.0 * PI / len as f64;
        let wlen = Complex64::from_polar(1.0, ang);
        let mut i = 0;
        while i < n {
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = buf[i + k];
                let v = w * buf[i + k + len / 2];
                buf[i + k] = u + v;
                buf[i + k + len / 2] = u - v;
                w *= wlen;
            }
            i += len;
        }
        len <<= 1;
    }
}

/// Naive forward DFT of one line, using a precomputed twiddle table.
fn dft_naive(line: &[Complex64], twiddles: &[Complex64], out: &mut [Complex64]) {
    let m = line.len();
    for (t, slot) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, &v) in line.iter().enumerate() {
            acc += v * twiddles[(t * x) % m];
        }
        *slot = acc;
    }
}

fn transform_axis(buf: &mut [Complex64], moduli: &[usize], axis: usize) {
    let m = moduli[axis];
    if m == 1 {
        return;
    }
    let inner: usize = moduli[axis + 1..].iter().product();
    let outer: usize = moduli[..axis].iter().product();
    let pow2 = m.is_power_of_two();
    let twiddles: Vec<Complex64> = if pow2 {
        Vec::new()
    } else {
        (0..m)
            .map(|j| Complex64::from_polar(1.0, -2.0 * PI * j as f64 / m as f64))
            .collect()
    };
    let mut line = vec![Complex64::new(0.0, 0.0); m];
    let mut scratch = vec![Complex64::new(0.0, 0.0); m];
    for o in 0..outer {
        for i in 0..inner {
            let base = o * m * inner + i;
            for t in 0..m {
                line[t] = buf[base + t * inner];
            }
            if pow2 {
                fft_pow2(&mut line);
                for t in 0..m {
                    buf[base + t * inner] = line[t];
                }
            } else {
                dft_naive(&line, &twiddles, &mut scratch);
                for t in 0..m {
                    buf[base + t * inner] = scratch[t];
                }
            }
        }
    }
}

/// Forward transform of a sparse complex function with the default order cap.
pub fn dft(f: &BTreeMap<Element, Complex64>, spec: &GroupSpec) -> Result<DualFunction> {
    dft_with_cap(f, spec, DEFAULT_DFT_CAP)
}

/// Forward transform with an explicit cap on the group order.
pub fn dft_with_cap(
    f: &BTreeMap<Element, Complex64>,
    spec: &GroupSpec,
    cap: usize,
) -> Result<DualFunction> {
    if !spec.is_fully_finite() {
        return Err(Error::RequiresEmbedding);
    }
    let order = spec.order().expect("fully finite spec has an order");
    if order > cap as u128 {
        return Err(Error::Resource {
            what: "dft group order",
            cap,
            got: order as usize,
        });
    }
    let moduli = factor_moduli(spec);
    if !moduli.iter().all(|m| m.is_power_of_two()) && order > NAIVE_DFT_CAP as u128 {
        return Err(Error::Resource {
            what: "dft group order (non-power-of-two factor, naive path)",
            cap: NAIVE_DFT_CAP,
            got: order as usize,
        });
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); order as usize];
    for (e, &v) in f {
        let e = canon(e.coords(), spec)?;
        buf[flat_index(e.coords(), &moduli)] += v;
    }
    for axis in 0..moduli.len() {
        transform_axis(&mut buf, &moduli, axis);
    }
    Ok(DualFunction {
        spec: spec.clone(),
        values: buf,
    })
}

/// Indicator of a set as a sparse complex function.
pub fn indicator(a: &GSet) -> BTreeMap<Element, Complex64> {
    a.iter()
        .map(|e| (e.clone(), Complex64::new(1.0, 0.0)))
        .collect()
}

/// Transform of an indicator with the default cap.
pub fn dft_indicator(a: &GSet) -> Result<DualFunction> {
    dft(&indicator(a), a.spec())
}

fn mean_abs_pow(f: &DualFunction, p: f64) -> f64 {
    let n = f.values.len() as f64;
    f.values.iter().map(|v| v.norm().powf(p)).sum::<f64>() / n
}

/// `L^p` norm on the dual under the Haar probability measure:
/// `((1/|G|) Σ_t |F(t)|^p)^{1/p}`, with the max for `p = ∞`.
pub fn lp_dual_norm(f: &DualFunction, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "exponent p = {p} must be >= 1"
        )));
    }
    if p.is_infinite() {
        return Ok(f.values.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    Ok(mean_abs_pow(f, p).powf(1.0 / p))
}

/// Relative Parseval defect of a sparse function:
/// `| ‖f̂‖_2^2 − Σ_x |f(x)|^2 | / max(1, Σ_x |f(x)|^2)`.
pub fn parseval_residual(f: &BTreeMap<Element, Complex64>, spec: &GroupSpec) -> Result<f64> {
    let transformed = dft(f, spec)?;
    let dual_sq = mean_abs_pow(&transformed, 2.0);
    let primal_sq: f64 = f.values().map(|v| v.norm_sqr()).sum();
    Ok((dual_sq - primal_sq).abs() / primal_sq.max(1.0))
}

/// Additive energy through the Fourier side: `‖1̂_A‖_4^4`.
pub fn energy_via_l4(a: &GSet) -> Result<f64> {
    let f = dft_indicator(a)?;
    Ok(mean_abs_pow(&f, 4.0))
}

/// One observed inequality `lhs <= rhs` with its slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginReport {
    pub lhs: f64,
    pub rhs: f64,
}

impl MarginReport {
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }

    /// Whether the inequality holds up to a relative tolerance.
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.lhs <= self.rhs + rel_tol * self.lhs.abs().max(self.rhs.abs())
    }
}

/// Observed log-convexity of dual norms: for `1/p = (1-θ)/p0 + θ/p1`,
/// `‖F‖_p <= ‖F‖_{p0}^{1-θ} ‖F‖_{p1}^{θ}`.
pub fn logconvexity_check(f: &DualFunction, p0: f64, p1: f64, theta: f64) -> Result<MarginReport> {
    if !(1.0..).contains(&p0) || p1 <= p0 {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= p0 < p1, got p0 = {p0}, p1 = {p1}"
        )));
    }
    if !(0.0..=1.0).contains(&theta) || theta == 0.0 || theta == 1.0 {
        return Err(Error::InvalidParameter(format!(
            "theta = {theta} must lie in (0,1)"
        )));
    }
    let inv_p = (1.0 - theta) / p0 + if p1.is_infinite() { 0.0 } else { theta / p1 };
    let p = 1.0 / inv_p;
    let lhs = lp_dual_norm(f, p)?;
    let rhs = lp_dual_norm(f, p0)?.powf(1.0 - theta) * lp_dual_norm(f, p1)?.powf(theta);
    Ok(MarginReport { lhs, rhs })
}

/// The Hausdorff-Young/Parseval chain for an indicator:
/// `‖1̂_A‖_p <= ‖1̂_A‖_2^{2/p} ‖1̂_A‖_∞^{(p-2)/p} <= |A|^{(p-1)/p}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HausdorffYoungReport {
    pub norm_p: f64,
    pub interpolated: f64,
    pub size_bound: f64,
}

impl HausdorffYoungReport {
    pub fn first(&self) -> MarginReport {
        MarginReport {
            lhs: self.norm_p,
            rhs: self.interpolated,
        }
    }

    pub fn second(&self) -> MarginReport {
        MarginReport {
            lhs: self.interpolated,
            rhs: self.size_bound,
        }
    }
}

pub fn hausdorff_young_check(a: &GSet, p: f64) -> Result<HausdorffYoungReport> {
    if !(2.0..).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "exponent p = {p} must be >= 2"
        )));
    }
    if a.is_empty() {
        return Err(Error::EmptyInput("hausdorff_young_check"));
    }
    let f = dft_indicator(a)?;
    let norm_p = lp_dual_norm(&f, p)?;
    let l2 = lp_dual_norm(&f, 2.0)?;
    let linf = lp_dual_norm(&f, f64::INFINITY)?;
    let interpolated = l2.powf(2.0 / p) * linf.powf((p - 2.0) / p);
    let size_bound = (a.len() as f64).powf((p - 1.0) / p);
    Ok(HausdorffYoungReport {
        norm_p,
        interpolated,
        size_bound,
    })
}

/// Statistics from sampling random functions on a dissociated support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RudinProbeStats {
    pub p: f64,
    pub trials: usize,
    pub seed: u64,
    pub max_ratio: f64,
    pub mean_ratio: f64,
}

/// Sample random functions supported on a dissociated set `L` (alternating
/// Rademacher signs and complex Gaussian coefficients) and measure
/// `‖f̂‖_{L^p} / (√p · ‖f‖_{ℓ²(L)})`. Deterministic for a fixed seed
/// (ChaCha8 keystream).
pub fn rudin_probe(l: &GSet, p: f64, trials: usize, seed: u64) -> Result<RudinProbeStats> {
    if !(2.0..).contains(&p) || p.is_infinite() {
        return Err(Error::InvalidParameter(format!(
            "exponent p = {p} must be finite and >= 2"
        )));
    }
    if trials < 1 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    if l.is_empty() {
        return Err(Error::EmptyInput("rudin_probe"));
    }
    if !is_dissociated(l, Strategy::Auto)?.is_dissociated() {
        return Err(Error::Precondition(
            "rudin_probe requires a dissociated support".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio = 0.0f64;
    let mut sum_ratio = 0.0f64;
    for trial in 0..trials {
        let coeffs: Vec<Complex64> = if trial % 2 == 0 {
            (0..l.len())
                .map(|_| {
                    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                    Complex64::new(sign, 0.0)
                })
                .collect()
        } else {
            (0..l.len())
                .map(|_| {
                    let (re, im) = gaussian_pair(&mut rng);
                    Complex64::new(re, im)
                })
                .collect()
        };
        let f: BTreeMap<Element, Complex64> =
            l.iter().cloned().zip(coeffs.iter().copied()).collect();
        let transformed = dft(&f, l.spec())?;
        let lp = lp_dual_norm(&transformed, p)?;
        let l2: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let ratio = lp / (p.sqrt() * l2);
        max_ratio = max_ratio.max(ratio);
        sum_ratio += ratio;
    }
    Ok(RudinProbeStats {
        p,
        trials,
        seed,
        max_ratio,
        mean_ratio: sum_ratio / trials as f64,
    })
}

/// Standard normal pair by Box-Muller, driven only by the given generator.
fn gaussian_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    (r * (2.0 * PI * u2).cos(), r * (2.0 * PI * u2).sin())
}
