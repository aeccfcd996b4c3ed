//! Generic-case complexity experiments.
//!
//! The [`density`] module measures how large a set of inputs is, one size
//! stratum at a time. The problem modules plug partial algorithms into it:
//!
//! * [`turing`]: halting of semi-infinite-tape machines, decided before the
//!   first repeated state;
//! * [`pcp`]: Post correspondence instances rejected by the prefix test;
//! * [`threesat`]: 3-CNF words that contain all eight clauses over the
//!   variables `1, 10, 11`, counted with transfer matrices;
//! * [`avgcase`]: polynomial-on-average criteria and their relation to
//!   generic polynomial bounds.

pub mod avgcase;
pub mod density;
pub mod numeric;
pub mod pcp;
pub mod threesat;
pub mod turing;

pub use density::{Answer, PartialVerdict, RngState};
