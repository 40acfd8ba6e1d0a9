//! Machine-readable run reports. One schema for every subcommand; payloads
//! mirror the library's certificate types. Exact quantities are integers or
//! `{num, den}` rationals, Fourier-side quantities are floats accompanied by
//! the tolerance they were checked at. Reports are byte-deterministic for a
//! fixed input and seed, except for the `timing_ms` field.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use addspan_core::{
    ChainReport, CoverReport, DissociationVerdict, Element, EnergyCertificate, GSet, MarginReport,
    PeelErrorNorm, PeelingTrace, Rational, SignVector, StructureReport,
};

pub const SCHEMA_ID: &str = "addspan-report/1";
/// Relative tolerance attached to Fourier-side inequality fields.
pub const FOURIER_TOLERANCE: f64 = 1e-6;

#[derive(Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Serialize)]
pub struct InputInfo {
    pub path: String,
    /// FNV-1a (64-bit) digest of the raw input bytes, hex.
    pub digest: String,
    pub group: String,
    pub elements: usize,
}

#[derive(Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub tool: Tool,
    pub subcommand: String,
    pub input: InputInfo,
    pub params: BTreeMap<String, Value>,
    pub result: Value,
    pub timing_ms: f64,
}

impl RunReport {
    pub fn new(
        subcommand: &str,
        input: InputInfo,
        params: BTreeMap<String, Value>,
        result: Value,
        timing_ms: f64,
    ) -> Self {
        RunReport {
            schema: SCHEMA_ID,
            tool: Tool {
                name: "addspan",
                version: env!("CARGO_PKG_VERSION"),
            },
            subcommand: subcommand.to_string(),
            input,
            params,
            result,
            timing_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}

pub fn fnv1a64(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("fnv1a64:{hash:016x}")
}

pub fn rational_value(r: Rational) -> Value {
    json!({
        "num": u64::try_from(*r.numer()).expect("desk-scale rational"),
        "den": u64::try_from(*r.denom()).expect("desk-scale rational"),
    })
}

pub fn element_value(e: &Element) -> Value {
    Value::Array(e.coords().iter().map(|&c| json!(c)).collect())
}

pub fn set_value(a: &GSet) -> Value {
    Value::Array(a.iter().map(element_value).collect())
}

pub fn sign_vector_value(sv: &SignVector) -> Value {
    json!({
        "support": Value::Array(sv.support().iter().map(element_value).collect()),
        "signs": sv.signs(),
    })
}

fn margin_value(m: &MarginReport) -> Value {
    json!({
        "lhs": m.lhs,
        "rhs": m.rhs,
        "holds": m.holds(FOURIER_TOLERANCE),
        "tolerance": FOURIER_TOLERANCE,
    })
}

pub fn energy_payload(cert: &EnergyCertificate) -> Value {
    json!({
        "energy": u64::try_from(cert.energy).expect("desk-scale energy"),
        "size": cert.size,
        "c": rational_value(cert.c),
    })
}

pub fn doubling_payload(k: Rational, size: usize, sumset_size: usize) -> Value {
    json!({
        "k": rational_value(k),
        "size": size,
        "sumset_size": sumset_size,
    })
}

pub fn dissociate_payload(verdict: &DissociationVerdict, strategy: &str) -> Value {
    match verdict {
        DissociationVerdict::Dissociated => json!({
            "dissociated": true,
            "strategy": strategy,
        }),
        DissociationVerdict::Not(w) => json!({
            "dissociated": false,
            "strategy": strategy,
            "witness": sign_vector_value(w.sign_vector()),
        }),
    }
}

pub fn span_enumerate_payload(l: &GSet, span: &GSet) -> Value {
    json!({
        "support_size": l.len(),
        "span_size": span.len(),
        "elements": set_value(span),
    })
}

pub fn span_contains_payload(target: &Element, witness: Option<&SignVector>) -> Value {
    json!({
        "target": element_value(target),
        "member": witness.is_some(),
        "witness": witness.map(sign_vector_value),
    })
}

pub fn peel_payload(
    trace: &PeelingTrace,
    norms: &[(f64, PeelErrorNorm)],
    embedded_spec: Option<String>,
) -> Value {
    json!({
        "l": trace.l,
        "mode": mode_name(trace.mode),
        "layer_count": trace.layer_count(),
        "layers": Value::Array(trace.layers.iter().map(set_value).collect()),
        "residual": set_value(&trace.residual),
        "residual_size": trace.residual.len(),
        "error_norms": norms.iter().map(|(p, n)| json!({
            "p": p,
            "lhs": n.lhs,
            "layer_bound": n.layer_bound,
        })).collect::<Vec<_>>(),
        "embedded_spec": embedded_spec,
    })
}

fn mode_name(mode: addspan_core::SearchMode) -> &'static str {
    match mode {
        addspan_core::SearchMode::Greedy => "greedy",
        addspan_core::SearchMode::Exact => "exact",
    }
}

pub fn structure_payload(report: &StructureReport) -> Value {
    json!({
        "certified": report.certified,
        "energy": energy_payload(&report.cert),
        "c_used": rational_value(report.c_used),
        "p": report.p,
        "log_base": "natural",
        "l_trajectory": report.l_trajectory,
        "layer_count": report.trace.layer_count(),
        "residual_size": report.trace.residual.len(),
        "span_set": set_value(&report.span_set),
        "span_size": report.span_set.len(),
        "intersect_size": report.intersect_size,
        "error_lhs": report.error_lhs,
        "error_rhs": report.error_rhs,
        "residual_lb": report.residual_lb,
        "tolerance": FOURIER_TOLERANCE,
        "embedded_spec": report.embedded_spec.as_ref().map(|s| s.to_string()),
    })
}

pub fn cover_payload(report: &CoverReport) -> Value {
    json!({
        "k": rational_value(report.k),
        "size": report.input.len(),
        "span_set": set_value(&report.span_set),
        "span_size": report.span_set.len(),
        "covered": report.covered,
        "bound_ratio": report.bound_ratio,
        "f_diag": {
            "min_over_a": report.f_diag.min_over_a,
            "sup_norm": report.f_diag.sup_norm,
            "l1_mass": u64::try_from(report.f_diag.l1_mass).expect("desk-scale mass"),
            "dual_l1": report.f_diag.dual_l1,
            "dual_l1_bound": report.f_diag.dual_l1_bound,
            "tolerance": FOURIER_TOLERANCE,
        },
    })
}

pub fn chain_payload(chain: &ChainReport) -> Value {
    json!({
        "p_prime": chain.p_prime,
        "p": chain.p,
        "l1": margin_value(&chain.l1),
        "l2_sq": u64::try_from(chain.l2_sq).expect("desk-scale"),
        "l2_sq_bound": u64::try_from(chain.l2_sq_bound).expect("desk-scale"),
        "l2_exact_holds": chain.l2_sq <= chain.l2_sq_bound,
        "parseval": margin_value(&chain.parseval),
        "lp": margin_value(&chain.lp),
        "lp_logconvex": margin_value(&chain.lp_logconvex),
        "pairing_constant": chain.pairing_constant,
        "span_size": chain.span_size,
    })
}
