use std::process::{Command, Output};

fn gaussmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaussmap"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn list_shows_manifolds_and_checks() {
    let o = gaussmap(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for name in [
        "plane",
        "sphere",
        "clifford_torus",
        "gauss-derivative",
        "log-superharmonic/lemma",
    ] {
        assert!(out.contains(name), "{name}");
    }
}

#[test]
fn catenoid_gauss_derivative_passes() {
    let o = gaussmap(&[
        "verify",
        "--manifold",
        "catenoid",
        "--checks",
        "gauss-derivative",
        "--grid",
        "5x5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn unknown_manifold_lists_valid_names() {
    let o = gaussmap(&["verify", "--manifold", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("catenoid"));
}

#[test]
fn unknown_check_lists_valid_ids() {
    let o = gaussmap(&["verify", "--manifold", "sphere", "--checks", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gauss-derivative"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify"][..],
        &["verify", "--manifold", "sphere", "--grid", "1x1"],
        &["verify", "--manifold", "sphere", "--grid", "fivebyfive"],
        &["verify", "--manifold", "sphere", "--params", "r"],
        &["verify", "--manifold", "sphere", "--params", "r=-1"],
        &["verify", "--manifold", "sphere", "--format", "xml"],
        &["verify", "--manifold", "sphere", "--tol-scale", "0"],
        &[
            "verify",
            "--manifold",
            "clifford_torus",
            "--checks",
            "jacobi-hypersurface",
        ],
        &[
            "verify",
            "--manifold",
            "plane",
            "--report",
            "/nonexistent/dir/r.json",
        ],
        &["algebra-selftest", "--dims", "13"],
        &["frobnicate"],
    ] {
        assert_eq!(gaussmap(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn algebra_selftest_passes() {
    let o = gaussmap(&["algebra-selftest", "--cases", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn strict_tolerance_exits_one() {
    let o = gaussmap(&[
        "verify",
        "--manifold",
        "torus",
        "--checks",
        "mean-curvature",
        "--tol-scale",
        "1e-12",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn csv_report_rows_match_points() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let json = dir.path().join("r.json");
    let common = [
        "verify",
        "--manifold",
        "sphere",
        "--params",
        "r=2,m=3",
        "--checks",
        "mean-curvature,parallel-curlfree",
        "--grid",
        "3x3",
    ];
    let mut a: Vec<&str> = common.to_vec();
    a.extend(["--format", "csv", "--report", csv.to_str().unwrap()]);
    assert_eq!(gaussmap(&a).status.code(), Some(0));
    let mut b: Vec<&str> = common.to_vec();
    b.extend(["--report", json.to_str().unwrap()]);
    assert_eq!(gaussmap(&b).status.code(), Some(0));

    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let points: usize = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["points"].as_array().unwrap().len())
        .sum();
    assert_eq!(points, 4 * 27);
    assert_eq!(v["config"]["params"]["r"], 2.0);
    let rows = std::fs::read_to_string(&csv).unwrap().lines().count() - 1;
    assert_eq!(rows, points);
}

#[test]
fn empty_check_list_passes_with_empty_results() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = gaussmap(&[
        "verify",
        "--manifold",
        "helicoid",
        "--checks",
        "",
        "--report",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 0);
    assert_eq!(v["pass"], true);
}

#[test]
fn verbose_prints_points() {
    let o = gaussmap(&[
        "verify",
        "--manifold",
        "plane",
        "--checks",
        "identity-map/derivative",
        "--grid",
        "2x2",
        "-vv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("u=[").count(), 4);
}
