use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Experiments known to [`crate::run`]. `Battery` runs all the others.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    HaltingGenericity,
    HaltingN1Exact,
    FirstStep,
    WalkOracle,
    PcpExact,
    PcpMc,
    PcpBound,
    ThreesatCounts,
    ThreesatEigen,
    ThreesatDensity,
    AvpLevin,
    AvpSeparation,
    MarkovBound,
    StolzConsistency,
    Battery,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 14] = [
        ExperimentId::HaltingN1Exact,
        ExperimentId::FirstStep,
        ExperimentId::HaltingGenericity,
        ExperimentId::WalkOracle,
        ExperimentId::PcpExact,
        ExperimentId::PcpMc,
        ExperimentId::PcpBound,
        ExperimentId::ThreesatCounts,
        ExperimentId::ThreesatEigen,
        ExperimentId::ThreesatDensity,
        ExperimentId::AvpLevin,
        ExperimentId::AvpSeparation,
        ExperimentId::MarkovBound,
        ExperimentId::StolzConsistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::HaltingGenericity => "halting-genericity",
            ExperimentId::HaltingN1Exact => "halting-n1-exact",
            ExperimentId::FirstStep => "first-step",
            ExperimentId::WalkOracle => "walk-oracle",
            ExperimentId::PcpExact => "pcp-exact",
            ExperimentId::PcpMc => "pcp-mc",
            ExperimentId::PcpBound => "pcp-bound",
            ExperimentId::ThreesatCounts => "threesat-counts",
            ExperimentId::ThreesatEigen => "threesat-eigen",
            ExperimentId::ThreesatDensity => "threesat-density",
            ExperimentId::AvpLevin => "avp-levin",
            ExperimentId::AvpSeparation => "avp-separation",
            ExperimentId::MarkovBound => "markov-bound",
            ExperimentId::StolzConsistency => "stolz-consistency",
            ExperimentId::Battery => "battery",
        }
    }

    /// Whether the experiment draws random samples.
    pub fn samples(self) -> bool {
        matches!(
            self,
            ExperimentId::HaltingGenericity
                | ExperimentId::FirstStep
                | ExperimentId::PcpMc
                | ExperimentId::MarkovBound
                | ExperimentId::Battery
        )
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        ExperimentId::ALL
            .into_iter()
            .chain([ExperimentId::Battery])
            .find(|id| id.name() == s)
            .ok_or_else(|| ConfigError::invalid("experiment", format!("unknown experiment `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeChoice {
    Exact,
    MonteCarlo,
    /// Exact where the stratum can be enumerated, sampled elsewhere.
    Auto,
}

/// One experiment run. Every field but `experiment` is optional; unset
/// fields take the experiment's default.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<ExperimentId>,
    pub n_list: Option<Vec<u64>>,
    /// Word lengths for the 3-SAT experiments.
    pub lengths: Option<Vec<u64>>,
    pub mode: Option<ModeChoice>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub confidence: Option<f64>,
    /// PCP alphabet size.
    pub k: Option<u8>,
    pub k_max: Option<u64>,
    /// PCP solution search depth.
    pub depth: Option<usize>,
    pub state_cap: Option<usize>,
    pub enumeration_cap: Option<u64>,
    pub horizon: Option<u64>,
    pub epsilon: Option<Vec<f64>>,
    /// Allowed distance from an exact value, in standard errors.
    pub sigmas: Option<f64>,
    pub power_tolerance: Option<f64>,
    pub power_iterations: Option<usize>,
    pub ratio_tolerance: Option<f64>,
    pub divergence_bound: Option<f64>,
    pub ratio_threshold: Option<f64>,
    pub tail_fraction: Option<f64>,
    pub bounded_slack: Option<f64>,
    /// Random premised instances for the Markov experiment.
    pub synthetic_instances: Option<usize>,
    /// Output locations are not echoed; they do not affect the data.
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
}

impl ConfigError {
    pub fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid { path: path.into(), message: message.into() }
    }
}

impl ExperimentConfig {
    pub fn for_experiment(id: ExperimentId) -> Self {
        Self { experiment: Some(id), ..Self::default() }
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    pub fn id(&self) -> Result<ExperimentId, ConfigError> {
        self.experiment.ok_or_else(|| ConfigError::invalid("experiment", "missing"))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let id = self.id()?;
        if id.samples() && self.seed.is_none() {
            let sampled = id != ExperimentId::FirstStep || self.mode != Some(ModeChoice::Exact);
            if sampled {
                return Err(ConfigError::invalid("seed", format!("required for `{id}`, which samples")));
            }
        }
        for (name, list) in [("n_list", &self.n_list), ("lengths", &self.lengths)] {
            let Some(list) = list else { continue };
            if list.is_empty() {
                return Err(ConfigError::invalid(name, "empty"));
            }
            if let Some(i) = (1..list.len()).find(|&i| list[i] <= list[i - 1]) {
                return Err(ConfigError::invalid(format!("{name}[{i}]"), "values must be strictly increasing"));
            }
        }
        if self.trials == Some(0) {
            return Err(ConfigError::invalid("trials", "must be at least 1"));
        }
        if let Some(c) = self.confidence {
            if !(c > 0.0 && c < 1.0) {
                return Err(ConfigError::invalid("confidence", "must lie in (0, 1)"));
            }
        }
        if let Some(k) = self.k {
            if k < 2 {
                return Err(ConfigError::invalid("k", "alphabet needs at least 2 letters"));
            }
        }
        if let Some(eps) = &self.epsilon {
            if let Some(i) = eps.iter().position(|&e| !(e > 0.0 && e.is_finite())) {
                return Err(ConfigError::invalid(format!("epsilon[{i}]"), "must be positive"));
            }
        }
        let positive = [
            ("sigmas", self.sigmas),
            ("power_tolerance", self.power_tolerance),
            ("ratio_tolerance", self.ratio_tolerance),
            ("divergence_bound", self.divergence_bound),
            ("ratio_threshold", self.ratio_threshold),
            ("tail_fraction", self.tail_fraction),
            ("bounded_slack", self.bounded_slack),
        ];
        for (name, value) in positive {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(ConfigError::invalid(name, "must be positive"));
                }
            }
        }
        if id == ExperimentId::Battery && (self.n_list.is_some() || self.lengths.is_some()) {
            return Err(ConfigError::invalid("n_list", "batteries use each experiment's own radii"));
        }
        Ok(())
    }

    /// The configuration a battery passes to one of its experiments.
    pub fn child(&self, id: ExperimentId) -> Self {
        Self { experiment: Some(id), out: None, csv: None, ..self.clone() }
    }
}
