//! Batch runner for the geometry verification suites.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails,
//! 2 on configuration or runtime errors.

mod config;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nalgebra::DVector;

use config::ScenarioConfig;
use report::Report;

#[derive(Parser)]
#[command(
    name = "pseudogeo",
    version,
    about = "Verification suites for curves and submanifolds of pseudo-Euclidean spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites selected by a scenario config.
    Check {
        /// Path to a scenario JSON file.
        config: PathBuf,
        /// Number of checks evaluated concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the full JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the CSV residual table here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Scale every residual tolerance by this factor.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
    },
    /// Inspect the geometry catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Trace one normal section and write the sampled points.
    Trace {
        /// Catalog chart name.
        geometry: String,
        /// Base parameter point, comma-separated (e.g. `0.3,0.2`).
        #[arg(long)]
        point: String,
        /// Tangent direction in parameter coordinates (e.g. `1,0`).
        #[arg(long)]
        direction: String,
        /// Pseudo-arclength span of the trace.
        #[arg(long, default_value_t = 1.2)]
        span: f64,
        /// Number of sampled points.
        #[arg(long, default_value_t = 41)]
        count: usize,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List every chart and reference curve with its known facts.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Check {
            config,
            jobs,
            report,
            csv,
            tol_scale,
        } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", config.display()))?;
            let scenario = ScenarioConfig::parse(&text)?;
            let tols = scenario.tolerances(tol_scale)?;
            let records = suites::run_scenario(&scenario, &tols, jobs)?;
            let built = Report::build(&scenario, tol_scale, records);
            built.print_summary();
            if let Some(path) = report {
                built.write_json(&path)?;
            }
            if let Some(path) = csv {
                built.write_csv(&path)?;
            }
            Ok(if built.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                print!("{}", suites::catalog_listing());
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Trace {
            geometry,
            point,
            direction,
            span,
            count,
            out,
        } => {
            let entry = suites::lookup_entry(&geometry)?;
            let u0 = parse_coords(&point)?;
            let x = DVector::from_vec(parse_coords(&direction)?);
            let tols = pseudogeo::Tolerances::default();
            let section = pseudogeo::sections::trace_normal_section(
                &entry.chart,
                &u0,
                &x,
                span,
                count,
                &tols,
            )?;
            write_trace_csv(&out, &entry, &section)?;
            println!(
                "traced normal section on {geometry}: {} samples, geodesic: {}, max tangential acceleration {:.3e}, slice residual {:.3e}",
                section.samples.len(),
                section.geodesic,
                section.max_tangential_acceleration,
                section.slice_residual,
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_coords(text: &str) -> anyhow::Result<Vec<f64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| anyhow::anyhow!("bad coordinate '{part}'"))
        })
        .collect()
}

fn write_trace_csv(
    path: &std::path::Path,
    entry: &pseudogeo::catalog::CatalogEntry,
    section: &pseudogeo::sections::NormalSection<'_>,
) -> anyhow::Result<()> {
    let n = entry.chart.param_dim();
    let m = entry.chart.ambient_dim();
    let mut writer = csv::Writer::from_path(path)?;
    let mut header = vec![String::from("s")];
    for i in 0..n {
        header.push(format!("u{}", i + 1));
    }
    for i in 0..m {
        header.push(format!("x{}", i + 1));
    }
    writer.write_record(&header)?;
    for sample in &section.samples {
        let mut row = vec![format!("{}", sample.s)];
        for v in &sample.u {
            row.push(format!("{v}"));
        }
        for v in sample.point.iter() {
            row.push(format!("{v}"));
        }
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}
