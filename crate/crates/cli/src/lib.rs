//! Experiment runner behind the `genericity` binary.
//!
//! A run takes an [`ExperimentConfig`], dispatches to one experiment (or
//! all of them, for `battery`) and returns an [`ExperimentResult`]. The
//! result splits into a [`Header`] with the timestamp and wall time, and a
//! [`Payload`] that depends only on the configuration: rerunning the same
//! config reproduces the payload byte for byte.

pub mod config;
mod experiments;

use std::io::Write;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value as Json;
use thiserror::Error;

pub use config::{ConfigError, ExperimentConfig, ExperimentId, ModeChoice};
pub use experiments::{Check, PlotData};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Density(#[from] genericity::density::DensityError),
    #[error(transparent)]
    Avg(#[from] genericity::avgcase::AvgError),
    #[error(transparent)]
    Pcp(#[from] genericity::pcp::PcpError),
    #[error(transparent)]
    ThreeSat(#[from] genericity::threesat::ThreeSatError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("result of `{0}` has no series to export")]
    NotSeries(ExperimentId),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Header {
    pub timestamp_unix: u64,
    pub wall_time_ms: u128,
}

/// Everything a run reports except timing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Payload {
    pub tool_version: &'static str,
    pub experiment: ExperimentId,
    pub config: ExperimentConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub data: Json,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot: Option<PlotData>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ChildResult>,
}

/// One experiment of a battery. Failures are recorded and the battery
/// moves on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChildResult {
    pub experiment: ExperimentId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<Payload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub header: Header,
    pub payload: Payload,
}

impl Payload {
    pub fn to_json(&self) -> Result<String, RunError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Payload of a battery member, if it ran.
    pub fn child(&self, id: ExperimentId) -> Option<&Payload> {
        self.children.iter().find(|c| c.experiment == id).and_then(|c| c.payload.as_ref())
    }

    /// Checks flattened over battery members, names prefixed.
    pub fn all_checks(&self) -> Vec<Check> {
        let mut out = self.checks.clone();
        for child in &self.children {
            match &child.payload {
                Some(p) => out.extend(p.all_checks().into_iter().map(|c| Check { name: format!("{}: {}", child.experiment, c.name), ..c })),
                None => out.push(Check::new(child.experiment.name(), false, child.error.clone().unwrap_or_default())),
            }
        }
        out
    }
}

fn run_one(id: ExperimentId, config: &ExperimentConfig) -> Result<Payload, RunError> {
    let outcome = experiments::dispatch(id, config)?;
    Ok(Payload {
        tool_version: TOOL_VERSION,
        experiment: id,
        config: config.clone(),
        passed: outcome.checks.iter().all(|c| c.passed),
        checks: outcome.checks,
        data: outcome.data,
        plot: outcome.plot,
        children: Vec::new(),
    })
}

/// Validate `config` and run it. Writes the JSON payload and CSV plot data
/// when the config names output paths.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentResult, RunError> {
    config.validate()?;
    let id = config.id()?;
    let started = Instant::now();
    let timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let payload = if id == ExperimentId::Battery {
        let children: Vec<ChildResult> = ExperimentId::ALL
            .into_iter()
            .map(|child| match run_one(child, &config.child(child)) {
                Ok(p) => ChildResult { experiment: child, payload: Some(p), error: None },
                Err(e) => ChildResult { experiment: child, payload: None, error: Some(e.to_string()) },
            })
            .collect();
        let passed = children.iter().all(|c| c.payload.as_ref().is_some_and(|p| p.passed));
        Payload {
            tool_version: TOOL_VERSION,
            experiment: id,
            config: config.clone(),
            passed,
            checks: Vec::new(),
            data: Json::Null,
            plot: None,
            children,
        }
    } else {
        run_one(id, config)?
    };
    let result = ExperimentResult { header: Header { timestamp_unix, wall_time_ms: started.elapsed().as_millis() }, payload };
    if let Some(path) = &config.out {
        write_file(path, &result.payload.to_json()?)?;
    }
    if let Some(path) = &config.csv {
        export_plot_data(&result, path)?;
    }
    Ok(result)
}

fn write_file(path: &Path, text: &str) -> Result<(), RunError> {
    let io = |source| RunError::Io { path: path.display().to_string(), source };
    let mut file = std::fs::File::create(path).map_err(io)?;
    file.write_all(text.as_bytes()).map_err(io)?;
    Ok(())
}

/// CSV rendering of a result's plottable data.
pub fn plot_csv(result: &ExperimentResult) -> Result<String, RunError> {
    let payload = &result.payload;
    let mut out = String::new();
    match &payload.plot {
        Some(PlotData::Series { series }) => {
            out.push_str("n,estimate,ci_half_width\n");
            for p in &series.points {
                out.push_str(&format!("{},{},{}\n", p.n, p.value(), p.ci_half_width));
            }
        }
        Some(PlotData::PartialSums { report }) => {
            out.push_str("n,partial_sum\n");
            for l in &report.levels {
                out.push_str(&format!("{},{}\n", l.n, l.cumulative));
            }
        }
        Some(PlotData::Eigenvalues { lambda_full, lambda_omit }) => {
            out.push_str("lambda_full,lambda_omit,ratio\n");
            out.push_str(&format!("{lambda_full},{lambda_omit},{}\n", lambda_omit / lambda_full));
        }
        None => return Err(RunError::NotSeries(payload.experiment)),
    }
    Ok(out)
}

pub fn export_plot_data(result: &ExperimentResult, path: &Path) -> Result<(), RunError> {
    write_file(path, &plot_csv(result)?)
}
