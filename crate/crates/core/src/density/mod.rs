//! Size functions, stratification, and frequency estimation.
//!
//! A [`SizedDomain`] exposes spheres `I_n` (inputs of size `n`) and, by
//! union, balls `B_n`. The frequency `|R ∩ S_n| / |S_n|` of a predicate is
//! computed exactly by enumeration or closed-form counts, or estimated by
//! uniform sampling. Series of frequencies feed the convergence classifier,
//! and [`generic_time_report`] measures the halting set of a partial
//! algorithm under a time bound.

mod convergence;
mod domain;
mod ensemble;
mod frequency;
mod harness;
mod rng;

use thiserror::Error;

pub use convergence::{classify_convergence, Classification, ConvergenceReport, Fit, Residual, Tolerances};
pub use domain::{BinaryWord, BinaryWords, ElementStream, Everything, FnPredicate, Geometry, Predicate, SizedDomain};
pub use ensemble::{conditional_ensemble, uniform_ensemble, Ensemble, NORMALIZATION_TOLERANCE};
pub use frequency::{
    ci_half_width, frequency, frequency_series, spherical_vs_volume, Estimate, FrequencyPoint, FrequencySeries, Mode,
    ModeKind, CHUNK_TRIALS, DEFAULT_CONFIDENCE,
};
pub use harness::{generic_time_report, Answer, PartialVerdict};
pub use rng::RngState;
pub(crate) use domain::uniform_below;



#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("sphere {n} cannot be enumerated")]
    EnumerationUnavailable { n: u64 },
    #[error("no sampler for radius {n}")]
    SamplerUnavailable { n: u64 },
    #[error("sphere of radius {n} is empty")]
    EmptySphere { n: u64 },
    #[error("ball of radius {n} is empty")]
    EmptyBall { n: u64 },
    #[error("sphere {n} has {count} elements, over the enumeration cap {cap}")]
    CapExceeded { n: u64, count: String, cap: u64 },
    #[error("trials must be at least 1")]
    InvalidTrials,
    #[error("radii must be strictly increasing")]
    NotIncreasing,
    #[error("sphere {n}: declared count {declared} but enumerated {enumerated}")]
    InconsistentCount { n: u64, declared: String, enumerated: String },
    #[error("invalid weight {weight} at radius {n}")]
    NegativeWeight { n: u64, weight: f64 },
    #[error("zero total mass at radius {n}")]
    ZeroMass { n: u64 },
    #[error("series needs at least {need} points, got {got}")]
    TooFewPoints { got: usize, need: usize },
    #[error("at n = {n}: {source}")]
    AtRadius { n: u64, source: Box<DensityError> },
}
