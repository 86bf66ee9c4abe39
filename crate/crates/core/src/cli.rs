//! The `osculant` command line.
//!
//! Exit status: 0 on success, 1 when a check fails (or the input curve is
//! geometrically unsuitable), 2 on an undecidable numerical situation, 3 on
//! usage, parse and I/O errors.

use crate::convexity::{check_convex_criterion, check_convex_sampling, ConvexityReport};
use crate::curve::{build_model, CurveSpec, ModelKind, ParamCurve};
use crate::discriminant::{export, sample_discriminant, ExportFormat};
use crate::error::{Error, Result};
use crate::projection::{project_iterated, recursion_check};
use crate::projective::{normalize, ProjPoint};
use crate::stratification::{
    component_census, elliptic_hull_membership, label_from_count, tangency_data, transport, EllipticHull,
    DEFAULT_TAU_GRID,
};
use crate::tangency::count_roots;
use crate::tol::Tolerances;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PRECISION: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "osculant", version, about = "Convex curves in real projective space: root counts, hulls, discriminants")]
pub struct Cli {
    /// Curve: a JSON spec file, or `rational_normal:N` / `trig_convex:N`.
    #[arg(long, global = true)]
    pub curve: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random points for sampling checks.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: usize,
    /// Samples for the criterion check, the census and the recursion check.
    #[arg(long, global = true, default_value_t = 500)]
    pub samples: usize,
    #[arg(long = "t-steps", global = true, default_value_t = 128)]
    pub t_steps: usize,
    #[arg(long = "ruling-steps", global = true, default_value_t = 16)]
    pub ruling_steps: usize,
    /// Output format for `mesh`: obj, csv or json.
    #[arg(long, global = true, default_value = "csv")]
    pub format: String,
    /// Write the report or mesh here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long = "tol-rank", global = true)]
    pub tol_rank: Option<f64>,
    #[arg(long = "tol-zero", global = true)]
    pub tol_zero: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the sampling and the osculating-intersection convexity checks.
    CheckConvex,
    /// Tangency moments and root count of a point.
    Roots {
        /// Homogeneous coordinates, comma separated.
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Project onto the intersection of osculating hyperplanes and check
    /// the projected curve.
    Project {
        #[arg(required = true, allow_negative_numbers = true)]
        moments: Vec<f64>,
    },
    /// Census of root counts over random points.
    Components,
    /// Elliptic hull center and membership of probe points.
    Hull {
        /// Points to test, each comma separated.
        #[arg(long = "probe", allow_hyphen_values = true)]
        probes: Vec<String>,
        /// For odd n: the moment whose sliced hull supplies the center.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        tau: f64,
    },
    /// Sample the discriminant and export it.
    Mesh,
    /// Move a point to the root filtration of another curve.
    Transport {
        #[arg(allow_hyphen_values = true)]
        point: String,
        /// Target curve, same syntax as `--curve`.
        curve2: String,
    },
}

/// Parses arguments, runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match execute(&cli) {
        Ok((report, code)) => match emit(&cli, &report) {
            Ok(()) => code,
            Err(e) => report_error(&e),
        },
        Err(e) => report_error(&e),
    }
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Precision(_) | Error::OnDiscriminant(_) => EXIT_PRECISION,
        Error::Geometry(_) | Error::Degenerate { .. } => EXIT_FAIL,
        Error::Domain(_) | Error::Unsupported(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_) => EXIT_USAGE,
    }
}

fn report_error(e: &Error) -> i32 {
    eprintln!("osculant: {e}");
    exit_code(e)
}

fn configure_threads() {
    if let Some(n) = std::env::var("OSCULANT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Output of a command: either a JSON report or raw text (meshes).
enum Output {
    Json(Value),
    Text(String),
}

fn emit(cli: &Cli, out: &Output) -> Result<()> {
    let text = match out {
        Output::Json(v) => {
            let mut s = serde_json::to_string_pretty(v)?;
            s.push('\n');
            s
        }
        Output::Text(s) => s.clone(),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn tolerances(cli: &Cli) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    for (name, v) in [("rank", cli.tol_rank), ("zero", cli.tol_zero)] {
        if let Some(x) = v {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::Parse(format!("--tol-{name} must be in (0, 1), got {x}")));
            }
        }
    }
    if let Some(x) = cli.tol_rank {
        tol = tol.with_rank(x);
    }
    if let Some(x) = cli.tol_zero {
        tol = tol.with_zero(x);
    }
    Ok(tol)
}

/// Loads a curve from a spec file or a `model:n` shorthand.
pub fn load_curve(arg: &str) -> Result<ParamCurve> {
    if Path::new(arg).is_file() {
        return CurveSpec::load(arg)?.build();
    }
    let (model, n) = arg
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("'{arg}' is neither a curve file nor of the form model:n")))?;
    let kind = match model {
        "rational_normal" => ModelKind::RationalNormal,
        "trig_convex" => ModelKind::TrigConvex,
        other => return Err(Error::Parse(format!("unknown curve model '{other}'"))),
    };
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension in '{arg}'")))?;
    build_model(kind, n)
}

/// Parses comma-separated homogeneous coordinates.
pub fn parse_point(s: &str) -> Result<ProjPoint> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let v = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coordinate '{}'", x.trim())))
        })
        .collect::<Result<Vec<f64>>>()?;
    normalize(&v)
}

fn execute(cli: &Cli) -> Result<(Output, i32)> {
    let tol = tolerances(cli)?;
    let curve_arg = cli
        .curve
        .as_deref()
        .ok_or_else(|| Error::Parse("--curve is required".into()))?;
    let c = load_curve(curve_arg)?;
    match &cli.command {
        Command::CheckConvex => check_convex(cli, &c, &tol),
        Command::Roots { point } => roots(&c, &parse_point(point)?, &tol),
        Command::Project { moments } => project(cli, &c, moments, &tol),
        Command::Components => components(cli, &c, &tol),
        Command::Hull { probes, tau } => hull(&c, probes, *tau, &tol),
        Command::Mesh => mesh(cli, &c, &tol),
        Command::Transport { point, curve2 } => {
            let c2 = load_curve(curve2)?;
            transport_cmd(&c, &c2, &parse_point(point)?, &tol)
        }
    }
}

fn verdict_code(reports: &[&ConvexityReport]) -> i32 {
    if reports.iter().all(|r| r.passed()) {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn check_convex(cli: &Cli, c: &ParamCurve, tol: &Tolerances) -> Result<(Output, i32)> {
    let sampling = check_convex_sampling(c, cli.trials, cli.seed, tol)?;
    let criterion = check_convex_criterion(c, cli.samples, cli.seed, tol)?;
    for r in [&sampling, &criterion] {
        eprintln!("{}", r.summary());
    }
    let code = verdict_code(&[&sampling, &criterion]);
    let report = json!({
        "curve": c.label(),
        "n": c.dim(),
        "seed": cli.seed,
        "convex": code == EXIT_OK,
        "sampling": sampling,
        "criterion": criterion,
    });
    Ok((Output::Json(report), code))
}

fn roots(c: &ParamCurve, p: &ProjPoint, tol: &Tolerances) -> Result<(Output, i32)> {
    let rc = count_roots(c, p, tol)?;
    let stratum = label_from_count(c.dim(), &rc).ok();
    let report = json!({
        "point": p,
        "total": rc.total,
        "tangencies": rc.tangencies,
        "stratum": stratum,
    });
    Ok((Output::Json(report), EXIT_OK))
}

fn project(cli: &Cli, c: &ParamCurve, moments: &[f64], tol: &Tolerances) -> Result<(Output, i32)> {
    let proj = project_iterated(c, moments, tol)?;
    let convexity = check_convex_sampling(proj.curve(), cli.trials, cli.seed, tol)?;
    let recursion = recursion_check(&proj, cli.samples, cli.seed, tol)?;
    eprintln!("{}", convexity.summary());
    eprintln!(
        "recursion: {} cases, {} mismatches, {} skipped",
        recursion.cases, recursion.mismatches, recursion.skipped
    );
    let code = if convexity.passed() && recursion.holds() {
        EXIT_OK
    } else {
        EXIT_FAIL
    };
    let report = json!({
        "curve": c.label(),
        "moments": moments,
        "projected_dim": proj.curve().dim(),
        "convexity": convexity,
        "recursion": recursion,
    });
    Ok((Output::Json(report), code))
}

fn components(cli: &Cli, c: &ParamCurve, tol: &Tolerances) -> Result<(Output, i32)> {
    let report = component_census(c, cli.samples, cli.seed, tol)?;
    let code = if report.support() == report.expected_support() {
        EXIT_OK
    } else {
        eprintln!(
            "census support {:?} differs from {:?}",
            report.support(),
            report.expected_support()
        );
        EXIT_FAIL
    };
    Ok((Output::Json(serde_json::to_value(&report)?), code))
}

fn hull(c: &ParamCurve, probes: &[String], tau: f64, tol: &Tolerances) -> Result<(Output, i32)> {
    let n = c.dim();
    let (center, inradius, sliced) = if n % 2 == 0 {
        let h = EllipticHull::new(c, DEFAULT_TAU_GRID, tol)?;
        (h.center(), h.inradius(), None)
    } else {
        let proj = project_iterated(c, &[tau], tol)?;
        let h = EllipticHull::new(proj.curve(), DEFAULT_TAU_GRID, tol)?;
        (proj.to_ambient(&h.center())?, h.inradius(), Some(c.wrap(tau)))
    };
    let mut results = Vec::with_capacity(probes.len());
    for s in probes {
        let p = parse_point(s)?;
        let member = elliptic_hull_membership(c, &p, tol)?;
        results.push(json!({ "point": p, "member": member }));
    }
    let report = json!({
        "curve": c.label(),
        "n": n,
        "center": center,
        "inradius": inradius,
        "slice_moment": sliced,
        "center_member": elliptic_hull_membership(c, &center, tol)?,
        "probes": results,
    });
    Ok((Output::Json(report), EXIT_OK))
}

fn mesh(cli: &Cli, c: &ParamCurve, tol: &Tolerances) -> Result<(Output, i32)> {
    let format: ExportFormat = cli.format.parse()?;
    let sample = sample_discriminant(c, cli.t_steps, cli.ruling_steps, tol)?;
    Ok((Output::Text(export(&sample, format)?), EXIT_OK))
}

fn transport_cmd(c1: &ParamCurve, c2: &ParamCurve, p: &ProjPoint, tol: &Tolerances) -> Result<(Output, i32)> {
    let q = transport(p, c1, c2, tol)?;
    let source = tangency_data(c1, p, tol)?;
    let target = tangency_data(c2, &q, tol)?;
    let preserved = source.index == target.index && source.root_count() == target.root_count();
    let scale = c1.period() / c2.period();
    let moment_error = source
        .moments
        .iter()
        .map(|a| {
            target
                .moments
                .iter()
                .map(|b| c1.circular_distance(a.t, b.t * scale))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let report = json!({
        "point": p,
        "transported": q,
        "source": source,
        "target": target,
        "roots_preserved": preserved,
        "moment_error": moment_error,
    });
    Ok((Output::Json(report), if preserved { EXIT_OK } else { EXIT_FAIL }))
}
