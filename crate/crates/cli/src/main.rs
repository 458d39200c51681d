//! Command-line front end: construct wavelet families, compute frame bounds
//! and canonical-dual data on a test space, and run the theorem-check
//! battery. JSON reports go to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 success, 1 configuration error, 2 domain error (family not
//! in space, not a frame), 3 theorem-check violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use framelets::frame::battery::{run_battery, BatteryConfig, CheckKind, DEFAULT_SEED};
use framelets::{
    frame_bounds_with, ContainmentMode, CoordFamily, FrameError, FrameFamily, GeneratorSet,
    IndexSet, LCFunction, Prime, TestSpace, Tolerances,
};

#[derive(Parser)]
#[command(
    name = "framelets",
    version,
    about = "p-adic wavelet frame systems: bounds, duals, and theorem checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal frame bounds of the configured family on the test space.
    Bounds(RunArgs),
    /// Run one theorem-check battery (exit 3 on any violated inequality).
    Check {
        /// One of: erasure, perturb, image, bounded-below, dual-pair,
        /// tight-dual, injectivity, decomposition.
        theorem: String,
        #[command(flatten)]
        args: RunArgs,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Prime base (2..=97).
    #[arg(long, default_value_t = 2)]
    p: u64,

    /// Wavelet system: "kozyrev", "ks:M", or "custom:FILE.json".
    #[arg(long, default_value = "kozyrev")]
    system: String,

    /// Inclusive scale range, e.g. "-1..0".
    #[arg(long, default_value = "0..0", value_name = "MIN..MAX", allow_hyphen_values = true)]
    j: String,

    /// Translation depth: shifts range over fractions of norm <= p^m.
    #[arg(long, default_value_t = 1)]
    m: u32,

    /// Test space "J,K": support radius p^J, constancy scale p^-K.
    #[arg(long, default_value = "1,1", value_name = "J,K")]
    space: String,

    /// Report bounds on the family's span (implies projection).
    #[arg(long)]
    span_only: bool,

    /// Project out-of-space members instead of failing.
    #[arg(long)]
    project: bool,

    /// Seed for every randomized instance.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Randomized trials per check battery.
    #[arg(long, default_value_t = 50)]
    trials: usize,

    /// Random vectors per decomposition trial.
    #[arg(long, default_value_t = 20)]
    vectors: usize,

    /// Output format for the report: "json" or "csv".
    #[arg(long, default_value = "json")]
    format: String,

    /// Dump the frame-operator matrix to FILE as CSV ("re,im" cells).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Embed the family manifest (index list) in the report.
    #[arg(long)]
    manifest: bool,

    /// Override the oracle agreement tolerance (default 1e-12).
    #[arg(long, value_name = "EPS", allow_negative_numbers = true)]
    tol_oracle: Option<f64>,
    /// Override the matrix-identity tolerance (default 1e-9).
    #[arg(long, value_name = "EPS", allow_negative_numbers = true)]
    tol_linalg: Option<f64>,
    /// Override the theorem inequality slack (default 1e-8).
    #[arg(long, value_name = "EPS", allow_negative_numbers = true)]
    tol_theorem: Option<f64>,
    /// Override the relative rank threshold (default 1e-10).
    #[arg(long, value_name = "EPS", allow_negative_numbers = true)]
    tol_rank: Option<f64>,
    /// Override the relative tightness test (default 1e-9).
    #[arg(long, value_name = "EPS", allow_negative_numbers = true)]
    tol_tight: Option<f64>,
    /// Override the relative dual-bound tolerance (default 1e-8).
    #[arg(long, value_name = "EPS", allow_negative_numbers = true)]
    tol_dual: Option<f64>,
}

enum Failure {
    Config(String),
    Domain(String),
    Violation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Domain(_) => 2,
            Failure::Violation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Domain(m) | Failure::Violation(m) => m,
        }
    }
}

fn config_err<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Config(msg.into()))
}

struct Setup {
    prime: Prime,
    family: FrameFamily,
    space: TestSpace,
    coords: CoordFamily,
    projected: bool,
    tolerances: Tolerances,
    j_range: (i64, i64),
    space_jk: (u32, u32),
}

fn parse_j_range(text: &str) -> Result<(i64, i64), Failure> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| Failure::Config(format!("cannot parse scale range {text:?}")))?;
    let j_min: i64 = lo
        .trim()
        .parse()
        .map_err(|_| Failure::Config(format!("bad scale {lo:?}")))?;
    let j_max: i64 = hi
        .trim()
        .parse()
        .map_err(|_| Failure::Config(format!("bad scale {hi:?}")))?;
    if j_min > j_max {
        return config_err(format!("empty scale range {text:?}"));
    }
    if j_min.abs() > 32 || j_max.abs() > 32 {
        return config_err("scales limited to |j| <= 32 (digit budget)");
    }
    Ok((j_min, j_max))
}

fn parse_space(text: &str, p: u64) -> Result<(u32, u32), Failure> {
    let (j, k) = text
        .split_once(',')
        .ok_or_else(|| Failure::Config(format!("cannot parse space {text:?} (expected J,K)")))?;
    let j: u32 = j
        .trim()
        .parse()
        .map_err(|_| Failure::Config(format!("bad space parameter {text:?}")))?;
    let k: u32 = k
        .trim()
        .parse()
        .map_err(|_| Failure::Config(format!("bad space parameter {text:?}")))?;
    if j + k > 7 {
        return config_err("space parameters limited to J+K <= 7");
    }
    let dim = (p as u128).pow(j + k);
    if dim > 4096 {
        return config_err(format!("space dimension p^(J+K) = {dim} exceeds 4096"));
    }
    Ok((j, k))
}

fn parse_system(prime: Prime, text: &str) -> Result<GeneratorSet, Failure> {
    if text == "kozyrev" {
        return Ok(GeneratorSet::kozyrev(prime));
    }
    if let Some(order) = text.strip_prefix("ks:") {
        let order: u32 = order
            .parse()
            .map_err(|_| Failure::Config(format!("bad system order in {text:?}")))?;
        if order == 0 || order > 16 {
            return config_err("system order must be in 1..=16");
        }
        return GeneratorSet::khrennikov_shelkovich(prime, order)
            .map_err(|e| Failure::Config(e.to_string()));
    }
    if let Some(path) = text.strip_prefix("custom:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read {path}: {e}")))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Failure::Config(format!("bad JSON in {path}: {e}")))?;
        let list = value
            .as_array()
            .ok_or_else(|| Failure::Config(format!("{path}: expected an array of functions")))?;
        let mut generators = Vec::with_capacity(list.len());
        for entry in list {
            generators.push(
                LCFunction::from_json_value(prime, entry)
                    .map_err(|e| Failure::Config(format!("{path}: {e}")))?,
            );
        }
        if generators.is_empty() {
            return config_err(format!("{path}: no generators"));
        }
        return Ok(GeneratorSet::custom(prime, generators));
    }
    config_err(format!(
        "unknown system {text:?} (expected kozyrev, ks:M, or custom:FILE)"
    ))
}

fn tolerances_from(args: &RunArgs) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(v) = args.tol_oracle {
        tol.oracle = v;
    }
    if let Some(v) = args.tol_linalg {
        tol.linalg = v;
    }
    if let Some(v) = args.tol_theorem {
        tol.theorem = v;
    }
    if let Some(v) = args.tol_rank {
        tol.rank_rel = v;
    }
    if let Some(v) = args.tol_tight {
        tol.tight_rel = v;
    }
    if let Some(v) = args.tol_dual {
        tol.dual_rel = v;
    }
    tol
}

fn setup(args: &RunArgs) -> Result<Setup, Failure> {
    if args.p < 2 || args.p > 97 {
        return config_err("p must be a prime in 2..=97");
    }
    let prime = Prime::new(args.p).map_err(|_| Failure::Config("p must be prime".into()))?;
    if args.m > 16 {
        return config_err("translation depth limited to m <= 16");
    }
    if args.trials == 0 {
        return config_err("need at least one trial");
    }
    if args.format != "json" && args.format != "csv" {
        return config_err(format!("unknown format {:?}", args.format));
    }
    let j_range = parse_j_range(&args.j)?;
    let space_jk = parse_space(&args.space, args.p)?;

    let generators = parse_system(prime, &args.system)?;
    let index = IndexSet::full(generators.len(), j_range.0, j_range.1, args.m);
    let family =
        FrameFamily::build(&generators, &index).map_err(|e| Failure::Config(e.to_string()))?;
    let space = TestSpace::new(prime, space_jk.0, space_jk.1);

    let mode = if args.span_only || args.project {
        ContainmentMode::Project
    } else {
        ContainmentMode::Strict
    };
    let (coords, projected) = CoordFamily::from_family(&family, &space, mode).map_err(|e| {
        match e {
            FrameError::FamilyNotInSpace(bad) => Failure::Domain(format!(
                "family members outside the test space at indices {bad:?}; \
                 rerun with --project or --span-only"
            )),
            other => Failure::Domain(other.to_string()),
        }
    })?;
    Ok(Setup {
        prime,
        family,
        space,
        coords,
        projected,
        tolerances: tolerances_from(args),
        j_range,
        space_jk,
    })
}

fn dump_matrix_csv(path: &PathBuf, matrix: &framelets::CMatrix) -> Result<(), Failure> {
    let mut text = String::new();
    for i in 0..matrix.rows() {
        let row: Vec<String> = (0..matrix.cols())
            .map(|j| {
                let z = matrix.get(i, j);
                format!("\"{},{}\"", z.re, z.im)
            })
            .collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(path, text)
        .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))
}

fn emit_report(args: &RunArgs, report: &serde_json::Value) -> Result<(), Failure> {
    if args.format == "csv" {
        print!("{}", report_to_csv(report));
    } else {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("report serializes")
        );
    }
    Ok(())
}

/// Flat key,value lines for the csv format; nested keys join with dots.
fn report_to_csv(value: &serde_json::Value) -> String {
    let mut rows = Vec::new();
    flatten("", value, &mut rows);
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

fn flatten(prefix: &str, value: &serde_json::Value, rows: &mut Vec<(String, String)>) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, rows);
            }
        }
        serde_json::Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, rows);
            }
        }
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

fn cmd_bounds(args: &RunArgs) -> Result<(), Failure> {
    let s = setup(args)?;
    let bounds = frame_bounds_with(&s.coords, args.span_only, s.tolerances.rank_rel)
        .map_err(|e| Failure::Domain(e.to_string()))?;
    let tight = bounds.upper - bounds.lower <= s.tolerances.tight_rel * bounds.upper;
    let is_frame = bounds.lower > s.tolerances.rank_rel * bounds.upper && bounds.upper > 0.0;
    let mut report = json!({
        "check": "bounds",
        "p": s.prime.get(),
        "system": args.system,
        "jRange": [s.j_range.0, s.j_range.1],
        "m": args.m,
        "space": {"J": s.space_jk.0, "K": s.space_jk.1, "dim": s.space.dim()},
        "familySize": s.family.len(),
        "projected": s.projected,
        "spanOnly": args.span_only,
        "bounds": {"A": bounds.lower, "B": bounds.upper},
        "tight": tight,
        "isFrame": is_frame,
        "isBesselet": true,
        "besseletBound": bounds.upper,
        "seed": args.seed,
        "tolerances": serde_json::to_value(s.tolerances).expect("tolerances serialize"),
    });
    if args.manifest {
        report["family"] = s.family.manifest_json();
    }
    if let Some(path) = &args.out {
        let op = s
            .coords
            .frame_operator()
            .map_err(|e| Failure::Domain(e.to_string()))?;
        dump_matrix_csv(path, op.matrix())?;
        eprintln!("wrote frame-operator matrix to {}", path.display());
    }
    emit_report(args, &report)
}

fn cmd_check(theorem: &str, args: &RunArgs) -> Result<(), Failure> {
    let kind = CheckKind::from_name(theorem).ok_or_else(|| {
        let names: Vec<&str> = CheckKind::ALL.iter().map(|k| k.name()).collect();
        Failure::Config(format!(
            "unknown theorem {theorem:?}; expected one of {}",
            names.join(", ")
        ))
    })?;
    // The configured family enters as trial 0, viewed as a frame for its
    // own span, so out-of-space members are always projected here;
    // randomized instances run at the full space dimension.
    let mut args_projected = args.clone();
    args_projected.project = true;
    let s = setup(&args_projected)?;
    let initial = s
        .coords
        .restrict_to_span(s.tolerances.rank_rel)
        .map_err(|e| Failure::Domain(e.to_string()))?;
    let cfg = BatteryConfig {
        p: s.prime.get(),
        dim: s.space.dim(),
        trials: args.trials,
        seed: args.seed,
        vectors: args.vectors,
        tolerances: s.tolerances,
    };
    let summary = run_battery(kind, &cfg, Some(&initial)).map_err(|e| match e {
        FrameError::NotAFrame => Failure::Domain(
            "configured family is not a frame for its span; \
             adjust the system or space"
                .into(),
        ),
        other => Failure::Domain(other.to_string()),
    })?;
    let satisfied_count = summary.trials - summary.violations;
    let report = json!({
        "check": summary.check,
        "p": summary.p,
        "seed": summary.seed,
        "trials": summary.trials,
        "violations": summary.violations,
        "satisfiedCount": satisfied_count,
        "config": {
            "system": args.system,
            "jRange": [s.j_range.0, s.j_range.1],
            "m": args.m,
            "space": {"J": s.space_jk.0, "K": s.space_jk.1, "dim": s.space.dim()},
            "familySize": s.family.len(),
            "projected": s.projected,
        },
        "tolerances": serde_json::to_value(s.tolerances).expect("tolerances serialize"),
        "reports": serde_json::to_value(&summary.reports).expect("reports serialize"),
    });
    if let Some(path) = &args.out {
        let op = s
            .coords
            .frame_operator()
            .map_err(|e| Failure::Domain(e.to_string()))?;
        dump_matrix_csv(path, op.matrix())?;
        eprintln!("wrote frame-operator matrix to {}", path.display());
    }
    emit_report(args, &report)?;
    if summary.violations > 0 {
        return Err(Failure::Violation(format!(
            "{} of {} instances violated the {} inequality",
            summary.violations, summary.trials, summary.check
        )));
    }
    eprintln!("{satisfied_count}/{} satisfied", summary.trials);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let result = match &cli.command {
        Command::Bounds(args) => cmd_bounds(args),
        Command::Check { theorem, args } => cmd_check(theorem, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
