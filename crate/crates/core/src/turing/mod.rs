//! Halting for Turing machines with a semi-infinite tape over `{a0, a1}`.
//!
//! Programs are total tables from `(state, symbol)` to `(state', symbol',
//! direction)`, sized by their number of non-halting states. A left move
//! from the leftmost square crashes. [`algorithm_one`] decides halting on
//! programs that halt or crash before entering any state twice, and is
//! silent (`DontKnow`) elsewhere.

mod counting;
mod domain;
mod program;
mod simulate;

use thiserror::Error;

pub use counting::{
    first_step_survival, nonneg_walk_fraction, nonneg_walk_fraction_enumerated, sphere_count, SphereCount,
    WALK_ENUMERATION_MAX,
};
pub use domain::{DecidedByAlgorithmOne, SphereEnumerator, SurvivesFirstStep, TuringDomain};
pub use program::{Direction, Instruction, Symbol, TmProgram};
pub use simulate::{algorithm_one, algorithm_one_fuel, run_until_stop, simulate, verdict_is_sound, RunKind, RunOutcome};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TuringError {
    #[error("invalid program: {0}")]
    InvalidProgram(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
