//! Run configuration, execution, and report persistence.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::chart::FDConfig;
use crate::error::{GeoError, Result};
use crate::identities::{self, CheckResult, GridSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckSelection {
    All,
    List(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = GeoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(GeoError::InvalidParameter(format!(
                "unknown report format '{other}' (valid: json, csv)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub manifold: String,
    pub params: BTreeMap<String, f64>,
    pub grid: GridSpec,
    pub checks: CheckSelection,
    pub fd: FDConfig,
    pub tol_scale: f64,
    pub output: Option<PathBuf>,
    pub format: ReportFormat,
    pub verbosity: u8,
}

impl RunConfig {
    pub fn new(manifold: impl Into<String>) -> Self {
        Self {
            manifold: manifold.into(),
            params: BTreeMap::new(),
            grid: GridSpec::default(),
            checks: CheckSelection::All,
            fd: FDConfig::default(),
            tol_scale: 1.0,
            output: None,
            format: ReportFormat::Json,
            verbosity: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.fd.validate()?;
        self.grid.validate(&self.fd)?;
        if !(self.tol_scale > 0.0 && self.tol_scale.is_finite()) {
            return Err(GeoError::InvalidParameter(format!(
                "tolerance scale {} must be positive",
                self.tol_scale
            )));
        }
        if let CheckSelection::List(ids) = &self.checks {
            for id in ids {
                identities::resolve(id)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub timestamp: String,
    pub config: RunConfig,
    pub results: Vec<CheckResult>,
    pub pass: bool,
}

impl Report {
    pub fn new(config: RunConfig, results: Vec<CheckResult>) -> Self {
        let pass = results.iter().all(|r| r.pass);
        Self {
            version: VERSION.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            config,
            results,
            pass,
        }
    }

    /// Rows the CSV view would contain.
    pub fn point_count(&self) -> usize {
        self.results.iter().map(|r| r.points.len()).sum()
    }
}

/// Validates the configuration, builds the manifold and runs the selected
/// checks. Configuration problems are errors; failing checks are not.
pub fn execute(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let entry = catalog::get(&config.manifold, &config.params)?;
    let results = match &config.checks {
        CheckSelection::All => {
            identities::run_all(&entry, &config.grid, &config.fd, config.tol_scale)
        }
        CheckSelection::List(ids) => {
            let mut out = Vec::new();
            for id in ids {
                out.extend(identities::run_check(
                    id,
                    &entry,
                    &config.grid,
                    &config.fd,
                    config.tol_scale,
                )?);
            }
            out
        }
    };
    Ok(Report::new(config.clone(), results))
}

pub fn write_report(report: &Report, path: &Path, format: ReportFormat) -> Result<()> {
    let file = File::create(path)?;
    match format {
        ReportFormat::Json => {
            let mut w = BufWriter::new(file);
            serde_json::to_writer_pretty(&mut w, report)
                .map_err(|e| GeoError::Format(e.to_string()))?;
            writeln!(w)?;
            w.flush()?;
        }
        ReportFormat::Csv => write_csv(report, file)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct CsvRow<'a> {
    check_id: &'a str,
    anchor: &'a str,
    point: String,
    residual: f64,
    tolerance: f64,
    pass: bool,
    error: &'a str,
}

fn write_csv<W: Write>(report: &Report, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in &report.results {
        for p in &r.points {
            let point =
                p.u.iter()
                    .map(|x| format!("{x}"))
                    .collect::<Vec<_>>()
                    .join(";");
            w.serialize(CsvRow {
                check_id: &r.check_id,
                anchor: &r.anchor,
                point,
                residual: p.residual,
                tolerance: r.tolerance,
                pass: p.residual <= r.tolerance,
                error: p.error.as_deref().unwrap_or(""),
            })
            .map_err(|e| GeoError::Format(e.to_string()))?;
        }
    }
    if report.results.is_empty() {
        w.write_record([
            "check_id",
            "anchor",
            "point",
            "residual",
            "tolerance",
            "pass",
            "error",
        ])
        .map_err(|e| GeoError::Format(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_report(path: &Path) -> Result<Report> {
    let file = File::open(path)?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| GeoError::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(manifold: &str, checks: CheckSelection) -> RunConfig {
        let mut c = RunConfig::new(manifold);
        c.checks = checks;
        c.grid = GridSpec::new(vec![3, 3], 0.05);
        c
    }

    #[test]
    fn json_round_trip() {
        let report = execute(&quick("sphere", CheckSelection::All)).unwrap();
        assert!(report.pass);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        write_report(&report, &path, ReportFormat::Json).unwrap();
        assert_eq!(read_report(&path).unwrap(), report);

        let raw: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        for key in ["version", "config", "results", "pass"] {
            assert!(raw.get(key).is_some(), "{key}");
        }
        let first = &raw["results"][0];
        for key in [
            "check_id",
            "anchor",
            "points",
            "max_residual",
            "tolerance",
            "pass",
        ] {
            assert!(first.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn failed_points_survive_round_trip() {
        let mut c = quick("sphere", CheckSelection::All);
        c.fd.h1 = 0.5;
        c.fd.h2 = 0.02;
        c.grid.inset = 0.6;
        let report = execute(&c).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        write_report(&report, &path, ReportFormat::Json).unwrap();
        assert_eq!(read_report(&path).unwrap(), report);
    }

    #[test]
    fn csv_has_one_row_per_point() {
        let report = execute(&quick(
            "catenoid",
            CheckSelection::List(vec!["gauss-derivative".into(), "minimal-monogenic".into()]),
        ))
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_report(&report, &path, ReportFormat::Csv).unwrap();
        let mut rd = csv::Reader::from_path(&path).unwrap();
        assert_eq!(rd.records().count(), report.point_count());
        assert_eq!(report.point_count(), 4 * 9);
    }

    #[test]
    fn empty_selection_passes() {
        let report = execute(&quick("torus", CheckSelection::List(vec![]))).unwrap();
        assert!(report.results.is_empty());
        assert!(report.pass);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_report(&report, &path, ReportFormat::Csv).unwrap();
        assert_eq!(csv::Reader::from_path(&path).unwrap().records().count(), 0);
    }

    #[test]
    fn config_errors() {
        assert!(matches!(
            execute(&quick("nosuch", CheckSelection::All)),
            Err(GeoError::UnknownManifold { .. })
        ));
        assert!(matches!(
            execute(&quick("sphere", CheckSelection::List(vec!["nope".into()]))),
            Err(GeoError::UnknownCheck { .. })
        ));
        let mut c = quick("sphere", CheckSelection::All);
        c.grid.counts = vec![1];
        assert!(execute(&c).is_err());
        c = quick("sphere", CheckSelection::All);
        c.tol_scale = 0.0;
        assert!(execute(&c).is_err());
        assert!("xml".parse::<ReportFormat>().is_err());
        assert_eq!("CSV".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
    }

    #[test]
    fn tiny_tolerance_fails_overall() {
        let mut c = quick("sphere", CheckSelection::All);
        c.tol_scale = 1e-9;
        assert!(!execute(&c).unwrap().pass);
    }

    #[test]
    fn deterministic_except_timestamp() {
        let c = quick("helicoid", CheckSelection::All);
        let mut a = execute(&c).unwrap();
        let b = execute(&c).unwrap();
        a.timestamp = b.timestamp.clone();
        assert_eq!(a, b);
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let report = execute(&quick("plane", CheckSelection::List(vec![]))).unwrap();
        let err = write_report(
            &report,
            Path::new("/nonexistent/dir/r.json"),
            ReportFormat::Json,
        )
        .unwrap_err();
        assert!(matches!(err, GeoError::Io(_)));
    }
}
