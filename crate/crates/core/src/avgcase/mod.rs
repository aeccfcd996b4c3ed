//! Average-case criteria next to generic ones.
//!
//! Functions are given sphere by sphere as weighted atoms, so sums over
//! spheres are exact or carried in log space and never enumerate large
//! spheres. The checks here are finite-horizon; every verdict carries the
//! horizon it was computed at.

mod checks;
mod markov;
mod measured;
mod separation;
mod value;

use thiserror::Error;

use crate::density::DensityError;

pub use checks::{
    expected_on_sphere, impagliazzo_check, levin_check, ln_expected_on_sphere, spheres_expected_report, AvgLevel,
    AvgReport, AvgTolerances, AvgVerdict, Criterion,
};
pub use markov::{markov_generic_bound, MarkovBound, MarkovPoint, MarkovReport};
pub use measured::{Atom, MeasuredFunction, WordMeasure};
pub use separation::{generic_bound_check, separation_report, CrossoverCheck, PolynomialCheck, SeparationReport, CROSSOVER_SCAN};
pub use value::{default_polynomial_family, Monomial, Value};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AvgError {
    #[error("sphere {n} carries no mass")]
    EmptySphere { n: u64 },
    #[error("premise fails at n = {n}: expectation {expectation} exceeds c*n = {bound}")]
    PremiseViolated { n: u64, expectation: f64, bound: f64 },
    #[error("empty radius list")]
    EmptyList,
    #[error(transparent)]
    Density(#[from] DensityError),
}
