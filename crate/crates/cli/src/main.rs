use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gaussmap_core::catalog;
use gaussmap_core::identities::{GridSpec, REGISTRY};
use gaussmap_core::report::{self, CheckSelection, ReportFormat, RunConfig};
use gaussmap_core::selftest;
use gaussmap_core::GeoError;

/// Verify geometric-calculus identities on classical submanifolds.
#[derive(Parser, Debug)]
#[command(name = "gaussmap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List catalog entries and check ids.
    List,
    /// Run residual checks on one catalog entry.
    Verify(VerifyArgs),
    /// Run the Clifford algebra property suite on random multivectors.
    AlgebraSelftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    manifold: String,
    /// Parameter overrides, e.g. `r=2,m=3`.
    #[arg(long, value_parser = parse_params)]
    params: Option<BTreeMap<String, f64>>,
    /// Comma-separated check ids or families; all applicable checks if omitted.
    #[arg(long)]
    checks: Option<String>,
    /// Grid counts per axis, e.g. `5x5`; the last count repeats.
    #[arg(long, value_parser = parse_grid, default_value = "5x5")]
    grid: GridCounts,
    /// Distance kept from the domain boundary.
    #[arg(long, default_value_t = 0.05)]
    inset: f64,
    #[arg(long)]
    h1: Option<f64>,
    #[arg(long)]
    h2: Option<f64>,
    /// One level of Richardson extrapolation on every difference.
    #[arg(long)]
    richardson: bool,
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
    /// Write the report to this path.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: ReportFormat,
    /// Print per-point residuals of failing checks (repeat for all points).
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 500)]
    cases: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 4, 5, 6])]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

fn parse_params(s: &str) -> Result<BTreeMap<String, f64>, String> {
    let mut out = BTreeMap::new();
    for pair in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got '{pair}'"))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| format!("'{v}' is not a number"))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
struct GridCounts(Vec<usize>);

fn parse_grid(s: &str) -> Result<GridCounts, String> {
    s.split(['x', 'X'])
        .map(|c| {
            c.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad grid '{s}', expected e.g. 5x5"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(GridCounts)
}

fn parse_checks(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|c| !c.is_empty())
        .map(String::from)
        .collect()
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            list();
            ExitCode::SUCCESS
        }
        Command::Verify(args) => verify(args),
        Command::AlgebraSelftest(args) => algebra_selftest(args),
    }
}

fn list() {
    println!("manifolds:");
    for name in catalog::list() {
        let params = catalog::default_params(name)
            .map(|p| {
                p.iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .unwrap_or_default();
        println!("  {name:<16} {params}");
    }
    println!("checks:");
    for c in REGISTRY.iter() {
        println!(
            "  {:<40} tol {:<8.0e} {:?}",
            c.id, c.tolerance, c.applicability
        );
    }
}

fn run_config(args: &VerifyArgs) -> RunConfig {
    let mut cfg = RunConfig::new(args.manifold.clone());
    if let Some(p) = &args.params {
        cfg.params = p.clone();
    }
    if let Some(c) = &args.checks {
        cfg.checks = CheckSelection::List(parse_checks(c));
    }
    cfg.grid = GridSpec::new(args.grid.0.clone(), args.inset);
    if let Some(h) = args.h1 {
        cfg.fd.h1 = h;
    }
    if let Some(h) = args.h2 {
        cfg.fd.h2 = h;
    }
    cfg.fd.richardson = args.richardson;
    cfg.tol_scale = args.tol_scale;
    cfg.output = args.report.clone();
    cfg.format = args.format;
    cfg.verbosity = args.verbose;
    cfg
}

fn usage_error(err: &GeoError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(EXIT_USAGE)
}

fn verify(args: VerifyArgs) -> ExitCode {
    let cfg = run_config(&args);
    let report = match report::execute(&cfg) {
        Ok(r) => r,
        Err(err) => return usage_error(&err),
    };
    for r in &report.results {
        let mark = if r.pass { "pass" } else { "FAIL" };
        println!(
            "{mark}  {:<40} max {:>10.3e}  tol {:.0e}  ({} points)",
            r.check_id,
            r.max_residual,
            r.tolerance,
            r.points.len()
        );
        if cfg.verbosity > 1 || (cfg.verbosity == 1 && !r.pass) {
            for p in &r.points {
                let note = p.error.as_deref().unwrap_or("");
                println!("        u={:?} residual={:.3e} {note}", p.u, p.residual);
            }
        }
    }
    let failed = report.results.iter().filter(|r| !r.pass).count();
    println!(
        "{}: {} checks, {} failed",
        if report.pass { "PASS" } else { "FAIL" },
        report.results.len(),
        failed
    );
    if let Some(path) = &cfg.output {
        if let Err(err) = report::write_report(&report, path, cfg.format) {
            return usage_error(&err);
        }
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn algebra_selftest(args: SelftestArgs) -> ExitCode {
    if args.cases == 0
        || args
            .dims
            .iter()
            .any(|d| *d == 0 || *d > gaussmap_core::multivector::MAX_DIM)
    {
        eprintln!(
            "error: cases must be positive and dims in 1..={}",
            gaussmap_core::multivector::MAX_DIM
        );
        return ExitCode::from(EXIT_USAGE);
    }
    let outcomes = selftest::run(&args.dims, args.cases, args.seed);
    for o in &outcomes {
        let mark = if o.pass { "pass" } else { "FAIL" };
        println!(
            "{mark}  {:<28} N={} cases={} max {:.3e}  tol {:.0e}",
            o.property, o.dim, o.cases, o.max_residual, o.tolerance
        );
    }
    if outcomes.iter().all(|o| o.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
