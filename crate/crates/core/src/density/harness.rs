use serde::{Deserialize, Serialize};

use super::domain::{FnPredicate, Geometry, SizedDomain};
use super::frequency::{frequency_series, FrequencySeries, Mode};
use super::{DensityError, RngState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    Yes,
    No,
    DontKnow,
}

/// Outcome of a fuel-bounded partial algorithm.
///
/// A partial algorithm that would loop forever off its domain answers
/// `DontKnow` instead; its halting set is `{answer != DontKnow}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialVerdict {
    pub answer: Answer,
    pub steps: u64,
    pub fuel: u64,
}

impl PartialVerdict {
    pub fn new(answer: Answer, steps: u64, fuel: u64) -> Self {
        debug_assert!(answer == Answer::DontKnow || steps <= fuel, "decided past fuel");
        Self { answer, steps, fuel }
    }

    pub fn yes(steps: u64, fuel: u64) -> Self {
        Self::new(Answer::Yes, steps, fuel)
    }

    pub fn no(steps: u64, fuel: u64) -> Self {
        Self::new(Answer::No, steps, fuel)
    }

    pub fn dont_know(steps: u64, fuel: u64) -> Self {
        Self::new(Answer::DontKnow, steps, fuel)
    }

    pub fn is_decided(&self) -> bool {
        self.answer != Answer::DontKnow
    }
}

/// Frequencies of `H_{A,f}`: inputs on which `solver` answers within
/// `bound(size)` steps. Classify the result against target 1 to read off a
/// generic (or strongly generic) upper bound.
pub fn generic_time_report<D, S, B>(
    domain: &D,
    solver: S,
    bound: B,
    n_list: &[u64],
    geometry: Geometry,
    mode: Mode,
    rng: RngState,
) -> Result<FrequencySeries, DensityError>
where
    D: SizedDomain,
    S: Fn(&D::Element) -> PartialVerdict + Sync,
    B: Fn(u64) -> u64 + Sync,
{
    let predicate = FnPredicate::new("decided-within-bound", |e: &D::Element| {
        let verdict = solver(e);
        verdict.is_decided() && verdict.steps <= bound(domain.size_of(e))
    });
    frequency_series(domain, &predicate, n_list, geometry, mode, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::BinaryWords;

    #[test]
    fn always_yes_in_one_step() {
        let d = BinaryWords::new();
        for mode in [Mode::Exact, Mode::monte_carlo(300)] {
            let s = generic_time_report(&d, |_| PartialVerdict::yes(1, 1), |n| n + 1, &[1, 2, 3, 4], Geometry::Sphere, mode, RngState::new(3))
                .unwrap();
            assert!(s.values().iter().all(|&v| v == 1.0));
        }
    }

    #[test]
    fn bound_below_steps_excludes_everything() {
        let d = BinaryWords::new();
        let s = generic_time_report(&d, |w: &Vec<u8>| PartialVerdict::yes(w.len() as u64 + 5, 100), |n| n, &[1, 2], Geometry::Sphere, Mode::Exact, RngState::new(0))
            .unwrap();
        assert!(s.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dont_know_is_outside_halting_set() {
        let d = BinaryWords::new();
        let solver = |w: &Vec<u8>| {
            if w.first() == Some(&1) {
                PartialVerdict::no(1, 10)
            } else {
                PartialVerdict::dont_know(10, 10)
            }
        };
        let s = generic_time_report(&d, solver, |_| 10, &[3], Geometry::Sphere, Mode::Exact, RngState::new(0)).unwrap();
        assert_eq!(s.values(), vec![0.5]);
    }
}
