//! Command-line interface: deterministic set generators, a text set-file
//! format, and JSON certificate reports for every pipeline and check.
//!
//! Exit codes: 0 success, 1 input or resource error, 2 certification
//! failure (`thm1 --require-cert`), 64 usage error.

mod report;
mod setfile;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use addspan_core as core;
use core::{GSet, Rational, SearchMode, Strategy, StructureOptions};

use report::{InputInfo, RunReport};

#[derive(Parser)]
#[command(
    name = "addspan",
    version,
    about = "Additive-structure toolkit: energy and doubling certificates, dissociated spans, peeling decompositions, and certified structure pipelines over finite abelian groups"
)]
struct Cli {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Brute,
    Mitm,
}

impl StrategyArg {
    fn to_core(self) -> Strategy {
        match self {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Brute => Strategy::Brute,
            StrategyArg::Mitm => Strategy::Mitm,
        }
    }

    fn name(self) -> &'static str {
        match self {
            StrategyArg::Auto => "auto",
            StrategyArg::Brute => "brute",
            StrategyArg::Mitm => "mitm",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Greedy,
    Exact,
}

impl ModeArg {
    fn to_core(self) -> SearchMode {
        match self {
            ModeArg::Greedy => SearchMode::Greedy,
            ModeArg::Exact => SearchMode::Exact,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ModeArg::Greedy => "greedy",
            ModeArg::Exact => "exact",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Additive energy certificate: E(A) and c = E(A)/|A|^3
    Energy {
        setfile: PathBuf,
        /// Fold duplicate elements instead of rejecting them
        #[arg(long)]
        dedupe: bool,
    },
    /// Doubling constant K = |A+A|/|A|
    Doubling {
        setfile: PathBuf,
        #[arg(long)]
        dedupe: bool,
    },
    /// Dissociativity verdict with a sign-vector witness
    Dissociate {
        setfile: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        #[arg(long)]
        dedupe: bool,
    },
    /// Enumerate Span(A), or test membership with --contains
    Span {
        setfile: PathBuf,
        /// Comma-separated coordinates of the element to search for
        #[arg(long)]
        contains: Option<String>,
        #[arg(long)]
        dedupe: bool,
    },
    /// Peel disjoint dissociated layers of size l and report error norms
    Peel {
        setfile: PathBuf,
        /// Layer size
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Greedy)]
        mode: ModeArg,
        /// Exponents for the Fourier-side error norms
        #[arg(long = "p", default_values_t = [4.0])]
        p: Vec<f64>,
        /// Cap on the transform group order
        #[arg(long)]
        max_group: Option<usize>,
        #[arg(long)]
        dedupe: bool,
    },
    /// Energy pipeline: certified peeling plus span intersection
    Thm1 {
        setfile: PathBuf,
        /// Initial layer size (default: ceil(ln|A| / c))
        #[arg(long)]
        l: Option<usize>,
        /// Energy ratio override as num/den, at most the computed c
        #[arg(long)]
        c: Option<String>,
        /// Double l until the measured error meets the threshold
        #[arg(long, action = ArgAction::Set, num_args = 0..=1,
              default_value_t = true, default_missing_value = "true")]
        adaptive: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Greedy)]
        mode: ModeArg,
        /// Exit 2 unless the report certifies
        #[arg(long)]
        require_cert: bool,
        #[arg(long)]
        max_group: Option<usize>,
        #[arg(long)]
        dedupe: bool,
    },
    /// Doubling pipeline: span cover plus convolution diagnostics
    Thm2 {
        setfile: PathBuf,
        /// Exponents for the dual-norm chain checks
        #[arg(long = "p-prime", default_values_t = [1.25, 1.5, 2.0])]
        p_prime: Vec<f64>,
        /// Skip the dual-norm chain checks
        #[arg(long)]
        no_chain: bool,
        #[arg(long)]
        dedupe: bool,
    },
    /// Parseval, energy-via-L4, Hausdorff-Young, and log-convexity checks
    FourierCheck {
        setfile: PathBuf,
        /// Extra exponents for the Hausdorff-Young chain
        #[arg(long = "p")]
        p: Vec<f64>,
        #[arg(long)]
        max_group: Option<usize>,
        #[arg(long)]
        dedupe: bool,
    },
    /// Deterministic set generators; emits set-file text
    ///
    /// Kinds: `ap n d s`, `geo n`, `box_random n w dim`,
    /// `sidon_greedy n`, `subgroup_union k h t`
    Gen {
        kind: String,
        params: Vec<i64>,
        /// Seed for the ChaCha8 generator backing random kinds
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    SetFile(#[from] setfile::SetFileError),
    #[error(transparent)]
    Core(#[from] core::Error),
    #[error("{0}")]
    BadArgument(String),
}

fn main() {
    let exit = match Cli::try_parse() {
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                0
            } else {
                eprint!("{e}");
                64
            }
        }
        Ok(cli) => match run(cli) {
            Ok(code) => code,
            Err(err) => {
                eprintln!("error: {err}");
                1
            }
        },
    };
    std::process::exit(exit);
}

struct LoadedSet {
    set: GSet,
    info: InputInfo,
}

fn load_set(path: &PathBuf, dedupe: bool) -> Result<LoadedSet, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Io(format!("{} is not UTF-8", path.display())))?;
    let set = setfile::parse_set_file(&text, dedupe)?;
    let info = InputInfo {
        path: path.display().to_string(),
        digest: report::fnv1a64(&bytes),
        group: set.spec().to_string(),
        elements: set.len(),
    };
    Ok(LoadedSet { set, info })
}

fn parse_rational(text: &str) -> Result<Rational, CliError> {
    let (num, den) = text
        .split_once('/')
        .ok_or_else(|| CliError::BadArgument(format!("expected num/den, got '{text}'")))?;
    let num: u128 = num
        .trim()
        .parse()
        .map_err(|_| CliError::BadArgument(format!("bad numerator '{num}'")))?;
    let den: u128 = den
        .trim()
        .parse()
        .map_err(|_| CliError::BadArgument(format!("bad denominator '{den}'")))?;
    if den == 0 {
        return Err(CliError::BadArgument("denominator must be nonzero".into()));
    }
    Ok(Rational::new(num, den))
}

fn emit(report: &RunReport, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => {
            println!("subcommand: {}", report.subcommand);
            println!(
                "input:      {} ({} elements over {})",
                report.input.path, report.input.elements, report.input.group
            );
            println!("digest:     {}", report.input.digest);
            if !report.params.is_empty() {
                let rendered: Vec<String> = report
                    .params
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                println!("params:     {}", rendered.join(" "));
            }
            print_value("result", &report.result, 0);
            println!("timing_ms:  {:.3}", report.timing_ms);
        }
    }
}

fn print_value(key: &str, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            println!("{pad}{key}:");
            for (k, v) in map {
                print_value(k, v, depth + 1);
            }
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            println!("{pad}{key}:");
            for (i, v) in items.iter().enumerate() {
                print_value(&i.to_string(), v, depth + 1);
            }
        }
        other => println!("{pad}{key}: {other}"),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let started = Instant::now();
    match cli.command {
        Command::Energy { setfile, dedupe } => {
            let loaded = load_set(&setfile, dedupe)?;
            let cert = core::additive_energy(&loaded.set)?;
            let params = BTreeMap::from([("dedupe".to_string(), json!(dedupe))]);
            let report = RunReport::new(
                "energy",
                loaded.info,
                params,
                report::energy_payload(&cert),
                ms(started),
            );
            emit(&report, cli.format);
            Ok(0)
        }
        Command::Doubling { setfile, dedupe } => {
            let loaded = load_set(&setfile, dedupe)?;
            let k = core::doubling(&loaded.set)?;
            let sumset_size = core::sumset(&loaded.set, &loaded.set)?.len();
            let params = BTreeMap::from([("dedupe".to_string(), json!(dedupe))]);
            let report = RunReport::new(
                "doubling",
                loaded.info,
                params,
                report::doubling_payload(k, loaded.set.len(), sumset_size),
                ms(started),
            );
            emit(&report, cli.format);
            Ok(0)
        }
        Command::Dissociate {
            setfile,
            strategy,
            dedupe,
        } => {
            let loaded = load_set(&setfile, dedupe)?;
            let verdict = core::is_dissociated(&loaded.set, strategy.to_core())?;
            let params = BTreeMap::from([
                ("strategy".to_string(), json!(strategy.name())),
                ("dedupe".to_string(), json!(dedupe)),
            ]);
            let report = RunReport::new(
                "dissociate",
                loaded.info,
                params,
                report::dissociate_payload(&verdict, strategy.name()),
                ms(started),
            );
            emit(&report, cli.format);
            Ok(0)
        }
        Command::Span {
            setfile,
            contains,
            dedupe,
        } => {
            let loaded = load_set(&setfile, dedupe)?;
            let mut params = BTreeMap::from([("dedupe".to_string(), json!(dedupe))]);
            let payload = match &contains {
                None => {
                    let span = core::span_enumerate(&loaded.set)?;
                    report::span_enumerate_payload(&loaded.set, &span)
                }
                Some(coords) => {
                    params.insert("contains".to_string(), json!(coords));
                    let target = setfile::parse_element(coords, loaded.set.spec())
                        .map_err(CliError::BadArgument)?;
                    let witness = core::span_contains(&loaded.set, &target)?;
                    report::span_contains_payload(&target, witness.as_ref())
                }
            };
            let report = RunReport::new("span", loaded.info, params, payload, ms(started));
            emit(&report, cli.format);
            Ok(0)
        }
        Command::Peel {
            setfile,
            l,
            mode,
            p,
            max_group,
            dedupe,
        } => {
            let loaded = load_set(&setfile, dedupe)?;
            let cap = max_group.unwrap_or(core::DEFAULT_DFT_CAP);
            // the Fourier side needs a finite model; embed integer specs
            let (finite, embedded_spec) = if loaded.set.spec().is_fully_finite() {
                (loaded.set.clone(), None)
            } else {
                let (embedded, record) = core::embed_to_torus(&loaded.set, 1)?;
                let name = record.target_spec().to_string();
                (embedded, Some(name))
            };
            let trace = core::bourgain_peel(&finite, l, mode.to_core())?;
            let order = finite.spec().order().expect("finite model");
            let norms: Vec<(f64, core::PeelErrorNorm)> = if order <= cap as u128 {
                core::peel_error_norms(&trace, &p)?
                    .into_iter()
                    .zip(p.iter().copied())
                    .map(|(n, p)| (p, n))
                    .collect()
            } else {
                Vec::new()
            };
            let params = BTreeMap::from([
                ("l".to_string(), json!(l)),
                ("mode".to_string(), json!(mode.name())),
                ("p".to_string(), json!(p)),
                ("max_group".to_string(), json!(cap)),
                ("dedupe".to_string(), json!(dedupe)),
            ]);
            let report = RunReport::new(
                "peel",
                loaded.info,
                params,
                report::peel_payload(&trace, &norms, embedded_spec),
                ms(started),
            );
            emit(&report, cli.format);
            Ok(0)
        }
        Command::Thm1 {
            setfile,
            l,
            c,
            adaptive,
            mode,
            require_cert,
            max_group,
            dedupe,
        } => {
            let loaded = load_set(&setfile, dedupe)?;
            let c_override = c.as_deref().map(parse_rational).transpose()?;
            let opts = StructureOptions {
                c_override,
                initial_l: l,
                adaptive,
                mode: mode.to_core(),
                dft_cap: max_group.unwrap_or(core::DEFAULT_DFT_CAP),
                ..Default::default()
            };
            let result = core::energy_structure(&loaded.set, &opts)?;
            let params = BTreeMap::from([
                ("l".to_string(), json!(l)),
                ("c".to_string(), json!(c)),
                ("adaptive".to_string(), json!(adaptive)),
                ("mode".to_string(), json!(mode.name())),
                ("require_cert".to_string(), json!(require_cert)),
                ("max_group".to_string(), json!(opts.dft_cap)),
                ("dedupe".to_string(), json!(dedupe)),
            ]);
            let certified = result.certified;
            let report = RunReport::new(
                "thm1",
                loaded.info,
                params,
                report::structure_payload(&result),
                ms(started),
            );
            emit(&report, cli.format);
            Ok(if require_cert && !certified { 2 } else { 0 })
        }
        Command::Thm2 {
            setfile,
            p_prime,
            no_chain,
            dedupe,
        } => {
            let loaded = load_set(&setfile, dedupe)?;
            let cover = core::cover_structure(&loaded.set)?;
            let mut payload = report::cover_payload(&cover);
            if !no_chain {
                let chains = p_prime
                    .iter()
                    .map(|&pp| core::doubling_chain_check(&loaded.set, pp))
                    .collect::<core::Result<Vec<_>>>()?;
                payload["chain"] = Value::Array(chains.iter().map(report::chain_payload).collect());
            }
            let params = BTreeMap::from([
                ("p_prime".to_string(), json!(p_prime)),
                ("no_chain".to_string(), json!(no_chain)),
                ("dedupe".to_string(), json!(dedupe)),
            ]);
            let report = RunReport::new("thm2", loaded.info, params, payload, ms(started));
            emit(&report, cli.format);
            Ok(0)
        }
        Command::FourierCheck {
            setfile,
            p,
            max_group,
            dedupe,
        } => {
            let loaded = load_set(&setfile, dedupe)?;
            let cap = max_group.unwrap_or(core::DEFAULT_DFT_CAP);
            let payload = fourier_check_payload(&loaded.set, &p, cap)?;
            let params = BTreeMap::from([
                ("p".to_string(), json!(p)),
                ("max_group".to_string(), json!(cap)),
                ("dedupe".to_string(), json!(dedupe)),
            ]);
            let report = RunReport::new("fourier-check", loaded.info, params, payload, ms(started));
            emit(&report, cli.format);
            Ok(0)
        }
        Command::Gen { kind, params, seed } => {
            let set = generate(&kind, &params, seed)?;
            print!("{}", setfile::serialize_set_file(&set));
            Ok(0)
        }
    }
}

fn ms(started: Instant) -> f64 {
    started.elapsed().as_secs_f64() * 1e3
}

fn fourier_check_payload(a: &GSet, extra_p: &[f64], cap: usize) -> Result<Value, CliError> {
    // work over a finite model, embedding when needed
    let (finite, embedded_spec) = if a.spec().is_fully_finite() {
        (a.clone(), None)
    } else {
        let (embedded, record) = core::embed_to_torus(a, 1)?;
        let name = record.target_spec().to_string();
        (embedded, Some(name))
    };
    let order = finite.spec().order().expect("finite model");
    if order > cap as u128 {
        return Err(CliError::Core(core::Error::Resource {
            what: "fourier-check group order",
            cap,
            got: order as usize,
        }));
    }
    let exact = core::additive_energy(&finite)?.energy;
    let viafourier = core::energy_via_l4(&finite)?;
    let rel_err = (viafourier - exact as f64).abs() / (exact as f64).max(1.0);
    let parseval = core::parseval_residual(&core::indicator(&finite), finite.spec())?;

    let p_ln = 2.0 + (finite.len() as f64).ln();
    let mut hy_exponents = vec![4.0, p_ln];
    hy_exponents.extend(extra_p.iter().copied());
    let mut hy = Vec::new();
    for &p in &hy_exponents {
        let r = core::hausdorff_young_check(&finite, p)?;
        hy.push(json!({
            "p": p,
            "norm_p": r.norm_p,
            "interpolated": r.interpolated,
            "size_bound": r.size_bound,
            "holds": r.first().holds(report::FOURIER_TOLERANCE)
                && r.second().holds(report::FOURIER_TOLERANCE),
        }));
    }

    // the exponent pattern the energy pipeline uses is L^4 between L^2 and
    // L^p; that needs p > 4 (|A| >= 8), so small sets get a midpoint check
    let transformed = core::dft_indicator(&finite)?;
    let theta = if p_ln > 4.0 {
        (1.0 / 4.0 - 1.0 / 2.0) / (1.0 / p_ln - 1.0 / 2.0)
    } else {
        0.5
    };
    let logconvex = core::logconvexity_check(&transformed, 2.0, p_ln, theta)?;

    Ok(json!({
        "embedded_spec": embedded_spec,
        "group_order": order as u64,
        "energy_exact": u64::try_from(exact).expect("desk-scale energy"),
        "energy_via_l4": viafourier,
        "energy_rel_err": rel_err,
        "parseval_residual": parseval,
        "hausdorff_young": hy,
        "logconvexity": {
            "p0": 2.0,
            "p1": p_ln,
            "theta": theta,
            "lhs": logconvex.lhs,
            "rhs": logconvex.rhs,
            "holds": logconvex.holds(report::FOURIER_TOLERANCE),
        },
        "tolerance": report::FOURIER_TOLERANCE,
    }))
}

fn want(params: &[i64], n: usize, usage: &str) -> Result<(), CliError> {
    if params.len() != n {
        return Err(CliError::BadArgument(format!(
            "expected {n} parameters: {usage}"
        )));
    }
    Ok(())
}

fn as_usize(v: i64, what: &str) -> Result<usize, CliError> {
    usize::try_from(v).map_err(|_| CliError::BadArgument(format!("{what} must be nonnegative")))
}

fn generate(kind: &str, params: &[i64], seed: u64) -> Result<GSet, CliError> {
    let set = match kind {
        "ap" => {
            want(params, 3, "ap <n> <d> <s>")?;
            core::corpus::gen_ap(as_usize(params[0], "n")?, params[1], params[2])?
        }
        "geo" => {
            want(params, 1, "geo <n>")?;
            core::corpus::gen_geo(as_usize(params[0], "n")?)?
        }
        "box_random" => {
            want(params, 3, "box_random <n> <w> <dim>")?;
            core::corpus::gen_box_random(
                as_usize(params[0], "n")?,
                params[1],
                as_usize(params[2], "dim")?,
                seed,
            )?
        }
        "sidon_greedy" => {
            want(params, 1, "sidon_greedy <n>")?;
            core::corpus::gen_sidon_greedy(as_usize(params[0], "n")?)?
        }
        "subgroup_union" => {
            want(params, 3, "subgroup_union <k> <h> <t>")?;
            core::corpus::gen_subgroup_union(
                as_usize(params[0], "k")?,
                as_usize(params[1], "h")?,
                as_usize(params[2], "t")?,
                seed,
            )?
        }
        other => {
            return Err(CliError::BadArgument(format!(
                "unknown generator kind '{other}' (expected ap, geo, box_random, sidon_greedy, subgroup_union)"
            )))
        }
    };
    Ok(set)
}
