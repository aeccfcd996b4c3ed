//! 3-SAT instances as words of the regular language `(R∧)*`.
//!
//! Any instance containing the eight sign patterns over variables
//! `1, 10, 11` is unsatisfiable, and [`algorithm_three`] answers `No`
//! exactly there. Words omitting a fixed clause form a regular language
//! whose growth rate is strictly below that of `(R∧)*`, so the instances it
//! fails on are exponentially rare. Transfer-matrix counting makes both
//! sides exact.

mod clause;
mod density;
mod dfa;
mod growth;
mod sat;

use thiserror::Error;

pub use clause::{core_clauses, parse_instance, Clause, Cnf3Instance, Literal, Sym};
pub use density::{all_eight_density_series, ContainsAllEight, DensityRoute, ThreeSatDomain, ALL_EIGHT_LABEL, MAX_EXACT_LENGTH};
pub use dfa::{build_all_present_dfa, build_counting_dfa, word_count, CountingDfa, DfaEdge, DfaExport, DEAD};
pub use growth::{growth_rate, trim, GrowthEstimate, DEFAULT_ITERATIONS, DEFAULT_TOLERANCE};
pub use sat::{algorithm_three, brute_force_sat, core_index, core_instance, core_mask};

/// Default bound on distinct variables for [`brute_force_sat`].
pub const DEFAULT_VAR_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThreeSatError {
    #[error("syntax error at symbol {position}: expected {expected}, found {}", found.map_or("end of input".to_string(), |c| format!("`{c}`")))]
    Syntax { position: usize, expected: String, found: Option<char> },
    #[error("invalid variable `{0}`")]
    InvalidVariable(String),
    #[error("{vars} variables exceed the cap of {cap}")]
    TooManyVariables { vars: usize, cap: usize },
    #[error("invalid automaton: {0}")]
    InvalidDfa(String),
    #[error("power iteration did not converge (last estimates {previous}, {last})")]
    NotConverged { previous: f64, last: f64 },
}
