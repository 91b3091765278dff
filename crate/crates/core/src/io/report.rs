//! Machine-readable run reports.
//!
//! The json keys `model, lambda, nnz, eta_kkt, rounds, avg_reduced_dim,
//! max_reduced_dim, wall_time_s, solver, criterion` are stable. The csv form has
//! one row per λ.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SieveError};
use crate::path::PathReport;
use crate::residual::Criterion;
use crate::sieve::Termination;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = SieveError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(SieveError::InvalidInput(format!(
                "unknown report format {other:?} (expected json or csv)"
            ))),
        }
    }
}

impl ReportFormat {
    /// Picks the format from a file extension, defaulting to json.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Self::Csv,
            _ => Self::Json,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub model: String,
    pub solver: String,
    pub criterion: String,
    pub lambda: Vec<f64>,
    pub nnz: Vec<usize>,
    pub eta_kkt: Vec<f64>,
    pub rounds: Vec<usize>,
    /// Mean `|I|` over every reduced problem of the run.
    pub avg_reduced_dim: f64,
    pub max_reduced_dim: usize,
    pub wall_time_s: Vec<f64>,
    pub objective: Vec<f64>,
    pub residual_norm: Vec<f64>,
    pub avg_reduced_dim_per_lambda: Vec<f64>,
    pub max_reduced_dim_per_lambda: Vec<usize>,
    pub terminated_by: Vec<Termination>,
    pub total_wall_time_s: f64,
    /// Everything needed to rerun: data source, seed, flags.
    pub config: serde_json::Value,
}

impl RunReport {
    pub fn from_path(
        model: &str,
        criterion: Criterion,
        report: &PathReport,
        config: serde_json::Value,
    ) -> Self {
        let e = &report.entries;
        Self {
            model: model.to_string(),
            solver: report.method.name().to_string(),
            criterion: criterion.name().to_string(),
            lambda: e.iter().map(|x| x.lambda).collect(),
            nnz: e.iter().map(|x| x.nnz).collect(),
            eta_kkt: e.iter().map(|x| x.eta_kkt).collect(),
            rounds: e.iter().map(|x| x.rounds).collect(),
            avg_reduced_dim: report.avg_reduced_dim(),
            max_reduced_dim: report.max_reduced_dim(),
            wall_time_s: e.iter().map(|x| x.wall_time_s).collect(),
            objective: e.iter().map(|x| x.objective).collect(),
            residual_norm: e.iter().map(|x| x.residual_norm).collect(),
            avg_reduced_dim_per_lambda: e.iter().map(|x| x.avg_reduced_dim()).collect(),
            max_reduced_dim_per_lambda: e.iter().map(|x| x.max_reduced_dim()).collect(),
            terminated_by: e.iter().map(|x| x.terminated_by).collect(),
            total_wall_time_s: report.wall_time_s,
            config,
        }
    }

    pub fn any_flagged(&self) -> bool {
        self.terminated_by.iter().any(|t| *t != Termination::Tolerance)
    }

    fn to_csv(&self) -> Result<Vec<u8>> {
        #[derive(Serialize)]
        struct Row<'a> {
            model: &'a str,
            solver: &'a str,
            criterion: &'a str,
            lambda: f64,
            nnz: usize,
            eta_kkt: f64,
            rounds: usize,
            avg_reduced_dim: f64,
            max_reduced_dim: usize,
            wall_time_s: f64,
            objective: f64,
            residual_norm: f64,
            terminated_by: &'static str,
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        for i in 0..self.lambda.len() {
            w.serialize(Row {
                model: &self.model,
                solver: &self.solver,
                criterion: &self.criterion,
                lambda: self.lambda[i],
                nnz: self.nnz[i],
                eta_kkt: self.eta_kkt[i],
                rounds: self.rounds[i],
                avg_reduced_dim: self.avg_reduced_dim_per_lambda[i],
                max_reduced_dim: self.max_reduced_dim_per_lambda[i],
                wall_time_s: self.wall_time_s[i],
                objective: self.objective[i],
                residual_norm: self.residual_norm[i],
                terminated_by: match self.terminated_by[i] {
                    Termination::Tolerance => "tolerance",
                    Termination::MaxRounds => "max_rounds",
                },
            })
            .map_err(csv_err)?;
        }
        w.into_inner()
            .map_err(|e| SieveError::InvalidInput(format!("csv buffer: {e}")))
    }
}

fn csv_err(e: csv::Error) -> SieveError {
    SieveError::InvalidInput(format!("csv: {e}"))
}

/// One method's totals in a benchmark comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: String,
    pub total_time_s: f64,
    /// Sum of sieving rounds over the path.
    pub s_rnd: usize,
    pub avg_d: f64,
    pub max_d: usize,
    pub flagged: usize,
    /// For the strong rule: active features it discarded, summed over the path.
    pub ssr_mistakes: Option<usize>,
}

impl BenchRow {
    pub fn from_path(report: &PathReport, ssr_mistakes: Option<usize>) -> Self {
        Self {
            method: report.method.name().to_string(),
            total_time_s: report.wall_time_s,
            s_rnd: report.total_rounds(),
            avg_d: report.avg_reduced_dim(),
            max_d: report.max_reduced_dim(),
            flagged: report.entries.iter().filter(|e| e.flagged()).count(),
            ssr_mistakes,
        }
    }
}

/// Writes a run report as pretty json or per-λ csv.
pub fn write_report(report: &RunReport, path: &Path, format: ReportFormat) -> Result<()> {
    let bytes = match format {
        ReportFormat::Json => (serde_json::to_string_pretty(report)? + "\n").into_bytes(),
        ReportFormat::Csv => report.to_csv()?,
    };
    fs::write(path, bytes)?;
    Ok(())
}

/// Writes a benchmark table as json (with the embedded config) or csv.
pub fn write_bench(
    rows: &[BenchRow],
    config: &serde_json::Value,
    path: &Path,
    format: ReportFormat,
) -> Result<()> {
    let bytes = match format {
        ReportFormat::Json => {
            let doc = serde_json::json!({ "rows": rows, "config": config });
            (serde_json::to_string_pretty(&doc)? + "\n").into_bytes()
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(csv_err)?;
            }
            w.into_inner()
                .map_err(|e| SieveError::InvalidInput(format!("csv buffer: {e}")))?
        }
    };
    fs::write(path, bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{IndexSet, LossKind, ProblemData, RegularizerSpec};
    use crate::path::{generate_path, lambda_grid_log10, RegularizerFamily, DEFAULT_EPS_HAT};
    use crate::sieve::SieveConfig;
    use crate::{DenseMatrix, InnerConfig};

    fn small_report() -> RunReport {
        let a = DenseMatrix::from_rows(&[
            vec![1.0, 0.2, -0.3],
            vec![0.1, 1.0, 0.4],
            vec![0.0, 0.3, 1.0],
            vec![0.5, -0.2, 0.1],
        ])
        .unwrap();
        let p = ProblemData::new(a, vec![1.0, -0.5, 0.25, 2.0], LossKind::LeastSquares).unwrap();
        let family = RegularizerFamily::new(RegularizerSpec::lasso(3, 1.0).unwrap());
        let grid = lambda_grid_log10(p.lambda_scale(), 0.5, 0.01, 4).unwrap();
        let path = generate_path(
            &p,
            &family,
            &grid,
            &SieveConfig::default(),
            &InnerConfig::default(),
            DEFAULT_EPS_HAT,
        )
        .unwrap();
        RunReport::from_path(
            "lasso-ls",
            Criterion::RelativeKkt,
            &path,
            serde_json::json!({"seed": 1, "support": IndexSet::full(2)}),
        )
    }

    #[test]
    fn json_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let r = small_report();
        let path = dir.path().join("r.json");
        write_report(&r, &path, ReportFormat::Json).unwrap();
        let back: RunReport = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(back, r);
        let raw: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        for key in [
            "model",
            "lambda",
            "nnz",
            "eta_kkt",
            "rounds",
            "avg_reduced_dim",
            "max_reduced_dim",
            "wall_time_s",
            "solver",
            "criterion",
        ] {
            assert!(raw.get(key).is_some(), "missing key {key}");
        }
    }

    #[test]
    fn csv_has_one_row_per_lambda() {
        let dir = tempfile::tempdir().unwrap();
        let r = small_report();
        let path = dir.path().join("r.csv");
        write_report(&r, &path, ReportFormat::Csv).unwrap();
        let mut rd = csv::Reader::from_path(&path).unwrap();
        let headers = rd.headers().unwrap().clone();
        assert_eq!(&headers[3], "lambda");
        let rows: Vec<_> = rd.records().collect::<std::result::Result<_, _>>().unwrap();
        assert_eq!(rows.len(), r.lambda.len());
        for (row, lam) in rows.iter().zip(&r.lambda) {
            assert_eq!(row[3].parse::<f64>().unwrap(), *lam);
        }
    }

    #[test]
    fn format_selection() {
        assert_eq!(ReportFormat::from_path(Path::new("a/b.csv")), ReportFormat::Csv);
        assert_eq!(ReportFormat::from_path(Path::new("a/b.json")), ReportFormat::Json);
        assert!("xml".parse::<ReportFormat>().is_err());
    }
}
