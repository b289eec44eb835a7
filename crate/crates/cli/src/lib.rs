//! The `kee` command line: single evaluations, oracle suites and scans.
//!
//! Exact values are written as `"p/q"` strings in JSON and CSV. Exit codes
//! are 0 on success, 1 for unusable input and 2 when two independent
//! computations disagree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use kee_core::tvariety::{futaki_vanishes, Valuation};
use kee_core::verdict::{k_polystable, Status};
use kee_core::verify::{run_suite, Suite};
use kee_core::{
    expected_vanishing_order, format_rational, log_discrepancy, make_surface, volume_curve, Angles, CurveId, Error,
    Rat, Scalar, SurfaceParams,
};

pub mod input;

use input::{parse_bool, parse_grid, parse_rational, read_config};

/// Environment variable naming the directory for output files when
/// `--output` is absent.
pub const OUTPUT_DIR_ENV: &str = "KEE_OUTPUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("inconsistency: {0}")]
    Inconsistency(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Inconsistency(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistency(_) | Error::IrrationalThreshold => CliError::Inconsistency(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kee",
    version,
    about = "Exact delta-invariants and K-polystability of blown-up Hirzebruch surfaces with conical boundary"
)]
pub struct Cli {
    /// File of key=value defaults, keyed by long option name.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Add decimal approximations next to exact values (lossy, for reading).
    #[arg(long, global = true)]
    pub approx: bool,
    /// Accept decimal rationals, converted through f64.
    #[arg(long, global = true)]
    pub lossy: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// δ, its witnesses and the K-polystability verdict at one point.
    Delta(PointArgs),
    /// Piecewise-quadratic volume curve of −K − xE for one divisor E.
    VolumeCurve {
        #[command(flatten)]
        point: PointArgs,
        /// C1tilde, C2tilde, E<i>, F<i>tilde, GenericFiber or PullbackC2.
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Run the oracle suites.
    Verify {
        /// Suite name, or "all".
        #[arg(long)]
        suite: Option<String>,
        /// Inputs per suite (per regime for lemmas and s-values).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Verdicts on a rational (beta1, beta2) grid, as CSV.
    Scan {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<usize>,
        /// lo:hi:count
        #[arg(long = "beta1-grid")]
        beta1_grid: Option<String>,
        /// lo:hi:count
        #[arg(long = "beta2-grid")]
        beta2_grid: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Delta(_) => "delta",
            Command::VolumeCurve { .. } => "volume-curve",
            Command::Verify { .. } => "verify",
            Command::Scan { .. } => "scan",
        }
    }
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Cone angle along C1tilde, as p/q.
    #[arg(long)]
    pub beta1: Option<String>,
    /// Cone angle along C2tilde, as p/q.
    #[arg(long)]
    pub beta2: Option<String>,
}

/// Command-line values layered over the config file.
struct Settings {
    file: BTreeMap<String, String>,
    lossy: bool,
    approx: bool,
}

impl Settings {
    fn get(&self, key: &str, flag: Option<String>) -> Option<String> {
        flag.or_else(|| self.file.get(key).cloned())
    }

    fn require(&self, key: &str, flag: Option<String>) -> Result<String, CliError> {
        self.get(key, flag)
            .ok_or_else(|| CliError::Input(format!("missing --{key}")))
    }

    fn number<N: std::str::FromStr>(&self, key: &str, flag: Option<N>) -> Result<Option<N>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.file
            .get(key)
            .map(|s| {
                s.parse()
                    .map_err(|_| CliError::Input(format!("{key} must be a nonnegative integer, got {s:?}")))
            })
            .transpose()
    }

    fn params(&self, n: Option<u32>, m: Option<usize>) -> Result<SurfaceParams, CliError> {
        let n = self
            .number("n", n)?
            .ok_or_else(|| CliError::Input("missing --n".into()))?;
        let m = self
            .number("m", m)?
            .ok_or_else(|| CliError::Input("missing --m".into()))?;
        Ok(SurfaceParams::new(n, m))
    }

    fn angles(&self, p: &PointArgs) -> Result<Angles<Rat>, CliError> {
        let b1 = parse_rational(&self.require("beta1", p.beta1.clone())?, self.lossy)?;
        let b2 = parse_rational(&self.require("beta2", p.beta2.clone())?, self.lossy)?;
        Ok(Angles::new(b1, b2)?)
    }
}

/// A rendered report and where it should go.
#[derive(Debug)]
pub struct Output {
    pub body: String,
    pub extension: &'static str,
    pub exit_code: u8,
}

fn rat(r: &Rat) -> Value {
    Value::String(format_rational(r))
}

fn sign_value(o: Ordering) -> i64 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    let file = match &cli.config {
        Some(p) => read_config(p)?,
        None => BTreeMap::new(),
    };
    let lossy = cli.lossy
        || file
            .get("lossy")
            .map(|s| parse_bool("lossy", s))
            .transpose()?
            .unwrap_or(false);
    let approx = cli.approx
        || file
            .get("approx")
            .map(|s| parse_bool("approx", s))
            .transpose()?
            .unwrap_or(false);
    let settings = Settings { file, lossy, approx };
    match cli.command {
        Command::Delta(p) => cmd_delta(&settings, &p),
        Command::VolumeCurve { point, divisor } => cmd_volume_curve(&settings, &point, divisor),
        Command::Verify { suite, samples, seed } => cmd_verify(&settings, suite, samples, seed),
        Command::Scan {
            n,
            m,
            beta1_grid,
            beta2_grid,
        } => cmd_scan(&settings, n, m, beta1_grid, beta2_grid),
    }
}

fn cmd_delta(settings: &Settings, p: &PointArgs) -> Result<Output, CliError> {
    let params = settings.params(p.n, p.m)?;
    let angles = settings.angles(p)?;
    let verdict = k_polystable(params, &angles)?;
    let Some(report) = &verdict.report else {
        return Err(CliError::Input(format!(
            "log anticanonical class is not ample: {}",
            verdict.notes.join("; ")
        )));
    };
    let model = make_surface(params);

    let mut per_divisor = Map::new();
    for (v, term) in &report.terms {
        let a = log_discrepancy(v.curve(), &angles);
        let s = expected_vanishing_order(&model, v.curve(), &angles)?;
        let sweep_ratio = a.clone() / s.clone();
        if sweep_ratio != *term {
            return Err(CliError::Inconsistency(format!(
                "{v}: T-variety term {} but volume sweep gives {}",
                format_rational(term),
                format_rational(&sweep_ratio)
            )));
        }
        let mut entry = Map::new();
        entry.insert("A".into(), rat(&a));
        entry.insert("S".into(), rat(&s));
        entry.insert("ratio".into(), rat(term));
        if settings.approx {
            entry.insert("ratio_approx".into(), json!(term.to_f64()));
        }
        per_divisor.insert(v.to_string(), Value::Object(entry));
    }

    let witnesses: Vec<Value> = report.witnesses.iter().map(|w| json!(w.to_string())).collect();
    let mut out = Map::new();
    out.insert("delta".into(), rat(&report.delta));
    if settings.approx {
        out.insert("delta_approx".into(), json!(report.delta.to_f64()));
    }
    out.insert("witness".into(), witnesses[0].clone());
    out.insert("witnesses".into(), Value::Array(witnesses));
    out.insert("condition_sign".into(), json!(sign_value(verdict.condition_sign)));
    out.insert(
        "futaki_zero".into(),
        json!(futaki_vanishes(params, &angles) == Ordering::Equal),
    );
    out.insert("status".into(), json!(verdict.status.to_string()));
    out.insert("per_divisor".into(), Value::Object(per_divisor));
    out.insert("notes".into(), json!(verdict.notes));
    out.insert("input".into(), input_json(params, &angles));
    Ok(Output {
        body: pretty(&Value::Object(out)),
        extension: "json",
        exit_code: 0,
    })
}

fn input_json(params: SurfaceParams, angles: &Angles<Rat>) -> Value {
    json!({
        "n": params.n,
        "m": params.m,
        "beta1": format_rational(&angles.beta1),
        "beta2": format_rational(&angles.beta2),
    })
}

fn cmd_volume_curve(settings: &Settings, p: &PointArgs, divisor: Option<String>) -> Result<Output, CliError> {
    let params = settings.params(p.n, p.m)?;
    let angles = settings.angles(p)?;
    let name = settings.require("divisor", divisor)?;
    let curve: CurveId = name.parse().map_err(CliError::Input)?;
    let model = make_surface(params);
    model.class_of::<Rat>(curve)?;
    let vc = volume_curve(&model, curve, &angles)?;
    let s = expected_vanishing_order(&model, curve, &angles)?;

    let pieces: Vec<Value> = vc
        .pieces
        .iter()
        .map(|piece| {
            let support: Vec<String> = piece.support.iter().map(|c| c.to_string()).collect();
            json!({
                "x_lo": rat(&piece.lo),
                "x_hi": rat(&piece.hi),
                "q0": rat(&piece.poly.q0),
                "q1": rat(&piece.poly.q1),
                "q2": rat(&piece.poly.q2),
                "negative_support": support,
            })
        })
        .collect();
    let mut out = Map::new();
    out.insert("divisor".into(), json!(curve.to_string()));
    out.insert("pieces".into(), Value::Array(pieces));
    out.insert("tau".into(), rat(&vc.tau()));
    out.insert("S".into(), rat(&s));
    if settings.approx {
        out.insert("tau_approx".into(), json!(vc.tau().to_f64()));
        out.insert("S_approx".into(), json!(s.to_f64()));
    }
    out.insert("input".into(), input_json(params, &angles));
    Ok(Output {
        body: pretty(&Value::Object(out)),
        extension: "json",
        exit_code: 0,
    })
}

fn cmd_verify(
    settings: &Settings,
    suite: Option<String>,
    samples: Option<usize>,
    seed: Option<u64>,
) -> Result<Output, CliError> {
    let suite = settings.get("suite", suite).unwrap_or_else(|| "all".into());
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(CliError::Input)?]
    };
    let samples = settings.number("samples", samples)?.unwrap_or(200);
    let seed = settings.number("seed", seed)?.unwrap_or(1);

    let reports: Vec<_> = suites.iter().map(|s| run_suite(*s, samples, seed)).collect();
    let ok = reports.iter().all(|r| r.ok());
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "samples": r.samples,
                "passed": r.passed,
                "ok": r.ok(),
                "counterexample": r.counterexample,
            })
        })
        .collect();
    let out = json!({
        "seed": seed,
        "samples": samples,
        "suites": rows,
        "ok": ok,
    });
    Ok(Output {
        body: pretty(&out),
        extension: "json",
        exit_code: if ok { 0 } else { 2 },
    })
}

fn cmd_scan(
    settings: &Settings,
    n: Option<u32>,
    m: Option<usize>,
    beta1_grid: Option<String>,
    beta2_grid: Option<String>,
) -> Result<Output, CliError> {
    let params = settings.params(n, m)?;
    let g1 = parse_grid(&settings.require("beta1-grid", beta1_grid)?, settings.lossy)?;
    let g2 = parse_grid(&settings.require("beta2-grid", beta2_grid)?, settings.lossy)?;
    let points: Vec<(Rat, Rat)> = g1
        .iter()
        .flat_map(|b1| g2.iter().map(move |b2| (b1.clone(), b2.clone())))
        .collect();

    // Nonpositive grid values are reported as outside the ample range
    // rather than rejected.
    let rows: Vec<Result<Vec<String>, CliError>> = points
        .par_iter()
        .map(|(b1, b2)| {
            let angles = Angles {
                beta1: b1.clone(),
                beta2: b2.clone(),
            };
            let v = k_polystable(params, &angles)?;
            let delta = v.delta().map(format_rational).unwrap_or_default();
            let mut row = vec![
                format_rational(b1),
                format_rational(b2),
                sign_value(v.condition_sign).to_string(),
                delta,
                v.status.to_string(),
            ];
            if settings.approx {
                row.push(b1.to_f64().to_string());
                row.push(b2.to_f64().to_string());
                row.push(v.delta().map(|d| d.to_f64().to_string()).unwrap_or_default());
            }
            Ok(row)
        })
        .collect();

    let mut header = vec!["beta1", "beta2", "condition_sign", "delta", "status"];
    if settings.approx {
        header.extend(["beta1_approx", "beta2_approx", "delta_approx"]);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).map_err(csv_error)?;
    for row in rows {
        w.write_record(row?).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Output {
        body: String::from_utf8(bytes).expect("CSV of ASCII fields"),
        extension: "csv",
        exit_code: 0,
    })
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Input(format!("writing CSV: {e}"))
}

/// Destination for a report: `--output`, else `$KEE_OUTPUT_DIR/<command>.<ext>`,
/// else stdout (`None`).
pub fn destination(output: Option<&Path>, env_dir: Option<&Path>, command: &str, extension: &str) -> Option<PathBuf> {
    output
        .map(Path::to_path_buf)
        .or_else(|| env_dir.map(|d| d.join(format!("{command}.{extension}"))))
}

/// Statuses in CSV and JSON output, for documentation and tests.
pub const STATUSES: [Status; 3] = [Status::KPolystable, Status::NotKPolystable, Status::OutsideAmpleRange];

/// Names accepted for `--divisor` on a surface with `m` blown-up points.
pub fn divisor_names(m: usize) -> Vec<String> {
    let mut names: Vec<String> = Valuation::all(m)
        .into_iter()
        .filter(|v| *v != Valuation::FiberOverP0)
        .map(|v| v.to_string())
        .collect();
    names.push(CurveId::PullbackC2.to_string());
    names
}
