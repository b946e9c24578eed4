//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one pass/fail line; exits non-zero if any fail.
// Negated comparisons make NaN residuals fail.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};

use gaussmap_core::catalog::{self, CatalogEntry};
use gaussmap_core::chart::FDConfig;
use gaussmap_core::curvature::mean_curvature_routes;
use gaussmap_core::identities::{run_check, GridSpec, FAILED_RESIDUAL};
use gaussmap_core::selftest;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Default catalog entries plus the 3-sphere.
fn entries() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = catalog::list()
        .iter()
        .map(|n| catalog::get_default(n).unwrap())
        .collect();
    out.push(catalog::get("sphere", &params(&[("m", 3.0)])).unwrap());
    out
}

fn label(e: &CatalogEntry) -> String {
    if e.name == "sphere" && e.chart.intrinsic_dim() == 3 {
        "sphere(m=3)".into()
    } else {
        e.name.clone()
    }
}

fn grid() -> GridSpec {
    GridSpec::new(vec![5, 5], 0.05)
}

fn max_residual(e: &CatalogEntry, id: &str, cfg: &FDConfig) -> f64 {
    max_residual_on(e, id, &grid(), cfg)
}

fn max_residual_on(e: &CatalogEntry, id: &str, grid: &GridSpec, cfg: &FDConfig) -> f64 {
    match run_check(id, e, grid, cfg, 1.0) {
        Ok(rs) => rs.iter().map(|r| r.max_residual).fold(0.0, f64::max),
        Err(_) => FAILED_RESIDUAL,
    }
}

/// Checks `id` against `bound` (strict) on every entry in `es`; reports the worst.
fn bound_all(es: &[CatalogEntry], id: &str, bound: f64, failures: &mut Vec<String>) -> f64 {
    let cfg = FDConfig::default();
    let mut worst = 0.0f64;
    for e in es {
        let r = max_residual(e, id, &cfg);
        worst = worst.max(r);
        if !(r < bound) {
            failures.push(format!("{} {id} = {r:.2e}", label(e)));
        }
    }
    worst
}

fn verdict(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome::new(true, summary)
    } else {
        Outcome::new(false, failures.join("; "))
    }
}

fn algebra_suite() -> Outcome {
    let outcomes = selftest::run(&[3, 4, 5, 6], 500, 20_251_017);
    let worst = outcomes.iter().map(|o| o.max_residual).fold(0.0, f64::max);
    let names: Vec<&str> = selftest::PROPERTIES.iter().map(|(n, _)| *n).collect();
    let covered =
        names.len() == 5 && outcomes.len() == 5 * 4 && outcomes.iter().all(|o| o.cases == 500);
    let bad: Vec<String> = outcomes
        .iter()
        .filter(|o| !(o.max_residual < 1e-12))
        .map(|o| format!("{} N={} {:.2e}", o.property, o.dim, o.max_residual))
        .collect();
    if !covered {
        return Outcome::new(false, "property suite incomplete");
    }
    verdict(
        bad,
        format!("5 properties x N in 3..=6 x 500 cases, worst {worst:.1e}"),
    )
}

fn identity_map(es: &[CatalogEntry]) -> Outcome {
    let mut f = Vec::new();
    let a = bound_all(es, "identity-map/derivative", 1e-5, &mut f);
    let b = bound_all(es, "identity-map/graded-laplacian", 1e-4, &mut f);
    let c = bound_all(es, "identity-map/laplace-beltrami", 1e-4, &mut f);
    verdict(
        f,
        format!("|dx-m| {a:.1e}, |box x| {b:.1e}, |LB x - H| rel {c:.1e}"),
    )
}

fn gauss_derivative(es: &[CatalogEntry]) -> Outcome {
    let mut f = Vec::new();
    let points = grid().counts.iter().product::<usize>();
    if points < 20 {
        f.push(format!("only {points} points"));
    }
    let g = bound_all(es, "gauss-derivative", 1e-5, &mut f);
    let minimal: Vec<CatalogEntry> = es
        .iter()
        .filter(|e| ["catenoid", "helicoid"].contains(&e.name.as_str()))
        .cloned()
        .collect();
    let h = bound_all(&minimal, "minimal-monogenic/mean-curvature", 1e-6, &mut f);
    let d = bound_all(&minimal, "minimal-monogenic/left", 1e-5, &mut f);
    verdict(
        f,
        format!("|dT + HT| {g:.1e}; minimal |H| {h:.1e}, |dT| {d:.1e}"),
    )
}

fn mean_curvature_routes_agree(es: &[CatalogEntry]) -> Outcome {
    let mut f = Vec::new();
    let spread = bound_all(es, "mean-curvature/routes", 1e-4, &mut f);
    let cfg = FDConfig::default();
    let mut worst_mag = 0.0f64;
    let mut worst_dir = 0.0f64;
    for m in [2.0, 3.0] {
        for r in [0.5, 1.0, 2.5] {
            let e = catalog::get("sphere", &params(&[("m", m), ("r", r)])).unwrap();
            let want = m / r;
            for u in e.chart.domain().grid(&[4], 0.1).unwrap() {
                let x = e.chart.eval(&u);
                let routes = mean_curvature_routes(e.chart(), &u, &cfg).unwrap();
                for h in [&routes.coefficients, &routes.gauss, &routes.normal_frame] {
                    let mag = (h.norm() - want).abs() / want;
                    let dir = (h / h.norm() + &x / x.norm()).norm();
                    worst_mag = worst_mag.max(mag);
                    worst_dir = worst_dir.max(dir);
                    if !(mag < 1e-5) || !(dir < 1e-6) {
                        f.push(format!(
                            "sphere m={m} r={r} u={u:?}: rel {mag:.1e}, dir {dir:.1e}"
                        ));
                    }
                }
            }
        }
    }
    verdict(
        f,
        format!("spread {spread:.1e}; spheres |H| rel err {worst_mag:.1e}, |H/|H| + x/|x|| {worst_dir:.1e}"),
    )
}

fn graded_laplacian_gauss(es: &[CatalogEntry]) -> Outcome {
    let mut f = Vec::new();
    let t = bound_all(es, "graded-laplace-gauss/theorem", 1e-3, &mut f);
    let n = bound_all(es, "normal-versions/graded-laplacian", 1e-3, &mut f);
    let parallel: Vec<CatalogEntry> = es
        .iter()
        .filter(|e| ["sphere", "clifford_torus"].contains(&e.name.as_str()))
        .cloned()
        .collect();
    let curl = bound_all(&parallel, "parallel-curlfree", 1e-4, &mut f);
    let harmonic = bound_all(&parallel, "graded-laplace-gauss/harmonic", 1e-3, &mut f);
    verdict(
        f,
        format!(
            "T {t:.1e}, N {n:.1e}; sphere/Clifford |curl H| {curl:.1e}, |box T| {harmonic:.1e}"
        ),
    )
}

fn jacobi(es: &[CatalogEntry]) -> Outcome {
    let mut f = Vec::new();
    let b = bound_all(es, "boxed-decomposition", 1e-3, &mut f);
    let j = bound_all(es, "jacobi-general", 1e-3, &mut f);
    let hyper: Vec<CatalogEntry> = es
        .iter()
        .filter(|e| e.chart.codim() == 1)
        .cloned()
        .collect();
    let four = bound_all(&hyper, "jacobi-hypersurface/four-vector", 1e-6, &mut f);
    let field = bound_all(&hyper, "jacobi-hypersurface/field-equation", 1e-3, &mut f);
    verdict(
        f,
        format!("boxed {b:.1e}, general {j:.1e}; codim 1: four-vector {four:.1e}, field equation {field:.1e}"),
    )
}

fn lemma_suite(es: &[CatalogEntry]) -> Outcome {
    let mut f = Vec::new();
    let dh = bound_all(es, "normal-divergence-lemma/mean-curvature", 1e-4, &mut f);
    let dn = bound_all(es, "normal-divergence-lemma/normals", 1e-4, &mut f);
    let sj = bound_all(es, "shape-jacobi-lemma", 1e-6, &mut f);
    let b2 = bound_all(es, "normB-consistency", 1e-6, &mut f);
    let sym = bound_all(es, "shape-symmetry", 1e-5, &mut f);
    verdict(
        f,
        format!(
            "div H {dh:.1e}, div n {dn:.1e}, (SxS)xT {sj:.1e}, |B|^2 {b2:.1e}, h-sym {sym:.1e}"
        ),
    )
}

fn covariant_flat(es: &[CatalogEntry]) -> Outcome {
    let mut f = Vec::new();
    let c = bound_all(es, "covariant-flat", 1e-6, &mut f);
    verdict(f, format!("|nabla T| {c:.1e}"))
}

fn log_laplacian() -> Outcome {
    let mut f = Vec::new();
    let targets = vec![
        catalog::get_default("catenoid").unwrap(),
        catalog::get_default("sphere").unwrap(),
        catalog::get("sphere", &params(&[("m", 3.0)])).unwrap(),
    ];
    let lemma = bound_all(&targets, "log-superharmonic/lemma", 1e-3, &mut f);
    // The registry reports max(0, -margin), so a residual of at most 1e-3
    // is a margin of at least -1e-3.
    let spheres = &targets[1..];
    let cfg = FDConfig::default();
    let mut shortfall = 0.0f64;
    for e in spheres {
        let r = max_residual(e, "log-superharmonic/inequality", &cfg);
        shortfall = shortfall.max(r);
        if !(r <= 1e-3) {
            f.push(format!("{} inequality shortfall {r:.2e}", label(e)));
        }
    }
    verdict(
        f,
        format!("lhs-rhs {lemma:.1e}; sphere margin >= -{shortfall:.1e}"),
    )
}

/// Residual must sit this far above roundoff to carry a step-size signature.
const TRUNCATION_FLOOR: f64 = 1e-9;

/// Both steps move together so that nested stencils are not dominated by
/// the fixed outer step.
fn steps(h: f64) -> FDConfig {
    FDConfig {
        h1: h,
        h2: h,
        ..FDConfig::default()
    }
}

fn fd_convergence(es: &[CatalogEntry]) -> Outcome {
    let ids = [
        "identity-map/derivative",
        "identity-map/graded-laplacian",
        "identity-map/laplace-beltrami",
        "gauss-derivative",
    ];
    let (coarse, fine) = (4e-3, 2e-3);
    // Deep enough that the coarse arc-length step stays inside every domain.
    let deep = GridSpec::new(vec![5, 5], 0.2);
    let mut f = Vec::new();
    let mut ratios = Vec::new();
    for e in es {
        for id in ids {
            let rc = max_residual_on(e, id, &deep, &steps(coarse));
            let rf = max_residual_on(e, id, &deep, &steps(fine));
            if rc >= FAILED_RESIDUAL || rf >= FAILED_RESIDUAL {
                f.push(format!("{} {id}: evaluation failed", label(e)));
                continue;
            }
            if rc < TRUNCATION_FLOOR {
                continue;
            }
            let ratio = rc / rf;
            ratios.push(ratio);
            if !(3.0..=5.0).contains(&ratio) {
                f.push(format!("{} {id}: ratio {ratio:.3}", label(e)));
            }
        }
    }
    if ratios.len() < 10 {
        f.push(format!("only {} truncation-dominated cases", ratios.len()));
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    verdict(
        f,
        format!("{} cases, ratio in [{lo:.3}, {hi:.3}]", ratios.len()),
    )
}

fn cli() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_gaussmap");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sphere.json");
    let ok = Command::new(bin)
        .args(["verify", "--manifold", "sphere", "--report"])
        .arg(&path)
        .output()
        .unwrap();
    let mut f = Vec::new();
    if ok.status.code() != Some(0) {
        f.push(format!("sphere exit {:?}", ok.status.code()));
    }
    let n_results = match std::fs::read_to_string(&path)
        .map(|s| serde_json::from_str::<serde_json::Value>(&s))
    {
        Ok(Ok(v)) => {
            let results = v["results"].as_array().cloned().unwrap_or_default();
            if results.is_empty() || !results.iter().all(|r| r["pass"] == true) || v["pass"] != true
            {
                f.push("report has failing or missing results".into());
            }
            results.len()
        }
        _ => {
            f.push("report missing or not JSON".into());
            0
        }
    };
    let strict = Command::new(bin)
        .args(["verify", "--manifold", "sphere", "--tol-scale", "1e-9"])
        .output()
        .unwrap();
    if strict.status.code() != Some(1) {
        f.push(format!("tol-scale 1e-9 exit {:?}", strict.status.code()));
    }
    verdict(
        f,
        format!("exit 0 with {n_results} passing results; tol-scale 1e-9 exit 1"),
    )
}

fn main() -> ExitCode {
    let es = entries();
    type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("algebra property suite", Box::new(algebra_suite)),
        ("identity map triple", Box::new(|| identity_map(&es))),
        (
            "Gauss map derivative, minimal iff monogenic",
            Box::new(|| gauss_derivative(&es)),
        ),
        (
            "mean curvature routes, sphere |H| = m/r inward",
            Box::new(|| mean_curvature_routes_agree(&es)),
        ),
        (
            "graded Laplacian of T and N",
            Box::new(|| graded_laplacian_gauss(&es)),
        ),
        (
            "boxed decomposition and Jacobi field equation",
            Box::new(|| jacobi(&es)),
        ),
        ("lemma suite", Box::new(|| lemma_suite(&es))),
        (
            "covariant derivative of T vanishes",
            Box::new(|| covariant_flat(&es)),
        ),
        (
            "log-Laplacian lemma and inequality",
            Box::new(log_laplacian),
        ),
        (
            "finite-difference convergence order",
            Box::new(|| fd_convergence(&es)),
        ),
        ("CLI exit codes and JSON report", Box::new(cli)),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}  {title}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
