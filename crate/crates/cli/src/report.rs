//! Report assembly: JSON document plus a CSV residual table.
//!
//! Identical configs produce byte-identical payloads apart from the
//! timestamp field; every float is written with Rust's shortest-roundtrip
//! formatting and record order is fixed by the execution plan.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::suites::SuiteRecord;

#[derive(Debug, Serialize)]
pub struct ReportCheck {
    pub id: String,
    pub suite: String,
    pub geometry: String,
    pub point: Vec<f64>,
    pub direction: Vec<f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub version: String,
    /// Seconds since the Unix epoch; the only non-reproducible field.
    pub timestamp: u64,
    pub config: ScenarioConfig,
    pub tol_scale: f64,
    pub summary: Summary,
    pub checks: Vec<ReportCheck>,
}

impl Report {
    pub fn build(config: &ScenarioConfig, tol_scale: f64, records: Vec<SuiteRecord>) -> Self {
        let checks: Vec<ReportCheck> = records
            .into_iter()
            .map(|sr| ReportCheck {
                id: sr.record.id,
                suite: sr.suite,
                geometry: sr.record.geometry,
                point: sr.record.point,
                direction: sr.record.direction,
                residual: sr.record.residual,
                tolerance: sr.record.tolerance,
                pass: sr.record.pass,
                note: sr.record.note,
            })
            .collect();
        let passed = checks.iter().filter(|c| c.pass).count();
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            config: config.clone(),
            tol_scale,
            summary: Summary {
                total: checks.len(),
                passed,
                failed: checks.len() - passed,
            },
            checks,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn write_json(&self, path: &Path) -> anyhow::Result<()> {
        let file = std::fs::File::create(path)?;
        let mut writer = std::io::BufWriter::new(file);
        serde_json::to_writer_pretty(&mut writer, self)?;
        writer.write_all(b"\n")?;
        Ok(())
    }

    /// Residual table: `check_id, geometry, point, direction, residual,
    /// tolerance, pass`. Vector-valued fields join coordinates with `;`.
    pub fn write_csv(&self, path: &Path) -> anyhow::Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        writer.write_record([
            "check_id",
            "geometry",
            "point",
            "direction",
            "residual",
            "tolerance",
            "pass",
        ])?;
        for check in &self.checks {
            writer.write_record([
                check.id.as_str(),
                check.geometry.as_str(),
                &join_coords(&check.point),
                &join_coords(&check.direction),
                &format!("{:e}", check.residual),
                &format!("{:e}", check.tolerance),
                if check.pass { "true" } else { "false" },
            ])?;
        }
        writer.flush()?;
        Ok(())
    }

    /// One line per check on stdout.
    pub fn print_summary(&self) {
        for check in &self.checks {
            let status = if check.pass { "PASS" } else { "FAIL" };
            println!(
                "[{status}] {:<45} residual {:>12.4e}  tol {:>9.1e}  {}",
                check.id,
                check.residual,
                check.tolerance,
                check.note.as_deref().unwrap_or("")
            );
        }
        println!(
            "{} checks: {} passed, {} failed",
            self.summary.total, self.summary.passed, self.summary.failed
        );
    }
}

fn join_coords(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(";")
}
