//! Post correspondence instances and the prefix test.
//!
//! Any solution starts with a pair whose words are prefix-related, so an
//! instance with no such pair has no solution. [`algorithm_two`] answers
//! `No` there and `DontKnow` otherwise; the instances it answers form a
//! set whose complement shrinks exponentially with the radius.

mod counting;
mod domain;
mod instance;
mod search;

use thiserror::Error;

pub use counting::{no_prefix_count, prefix_pair_bound, prefix_related_pairs, sphere_count, word_count, SphereCount};
pub use domain::{HasPrefixPair, NoPrefixPair, PcpDomain};
pub use instance::{algorithm_two, has_prefix_pair, PcpInstance, Word};
pub use search::{search_solution, search_solution_capped, DEFAULT_STATE_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcpError {
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("search exhausted after {states} states at depth {depth}")]
    SearchExhausted { states: usize, depth: usize },
}
