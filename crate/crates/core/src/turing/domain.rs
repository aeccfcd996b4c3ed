use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, RngCore};

use super::counting::sphere_count;
use super::program::{Instruction, TmProgram};
use super::simulate::{algorithm_one, simulate, RunKind};
use crate::density::{DensityError, ElementStream, Predicate, SizedDomain};

/// All programs, stratified by number of non-halting states, with the
/// uniform measure on each sphere.
#[derive(Clone, Debug)]
pub struct TuringDomain {
    enumeration_cap: u64,
}

impl TuringDomain {
    pub const DEFAULT_CAP: u64 = 10_000_000;

    pub fn new() -> Self {
        Self { enumeration_cap: Self::DEFAULT_CAP }
    }

    pub fn with_cap(enumeration_cap: u64) -> Self {
        Self { enumeration_cap }
    }
}

impl Default for TuringDomain {
    fn default() -> Self {
        Self::new()
    }
}

/// Every program of the sphere, lexicographic in target codes with the
/// first table entry most significant.
pub struct SphereEnumerator {
    states: u32,
    radix: u64,
    codes: Vec<u64>,
    done: bool,
}

impl Iterator for SphereEnumerator {
    type Item = TmProgram;

    fn next(&mut self) -> Option<TmProgram> {
        if self.done {
            return None;
        }
        let program = TmProgram::from_codes(self.states, &self.codes).expect("codes in range");
        self.done = true;
        for digit in self.codes.iter_mut().rev() {
            *digit += 1;
            if *digit < self.radix {
                self.done = false;
                break;
            }
            *digit = 0;
        }
        Some(program)
    }
}

impl SizedDomain for TuringDomain {
    type Element = TmProgram;

    fn size_of(&self, program: &TmProgram) -> u64 {
        program.states() as u64
    }

    fn min_radius(&self) -> u64 {
        1
    }

    fn sphere_count(&self, n: u64) -> Option<BigUint> {
        Some(if n == 0 { BigUint::default() } else { sphere_count(n).direct })
    }

    fn enumerate_sphere(&self, n: u64) -> Result<ElementStream<'_, TmProgram>, DensityError> {
        if n == 0 {
            return Ok(Box::new(std::iter::empty()));
        }
        let count = sphere_count(n).direct;
        if count.to_u64().is_none_or(|c| c > self.enumeration_cap) {
            return Err(DensityError::CapExceeded { n, count: count.to_string(), cap: self.enumeration_cap });
        }
        let states = n as u32;
        Ok(Box::new(SphereEnumerator {
            states,
            radix: Instruction::target_count(states),
            codes: vec![0; 2 * n as usize],
            done: false,
        }))
    }

    fn sample_sphere(&self, n: u64, rng: &mut dyn RngCore) -> Result<TmProgram, DensityError> {
        if n == 0 {
            return Err(DensityError::EmptySphere { n });
        }
        let states = n as u32;
        let radix = Instruction::target_count(states);
        let table = (0..2 * n).map(|_| Instruction::decode(rng.random_range(0..radix))).collect();
        Ok(TmProgram::new(states, table).expect("sampled targets in range"))
    }
}

/// The domain `D` of [`algorithm_one`]: programs that halt or crash before
/// repeating a state.
pub struct DecidedByAlgorithmOne;

impl Predicate<TmProgram> for DecidedByAlgorithmOne {
    fn label(&self) -> &str {
        "halts-or-crashes-before-repeat"
    }

    fn test(&self, program: &TmProgram) -> bool {
        algorithm_one(program).is_decided()
    }
}

/// Programs that at the first step crash or move to a fresh state.
pub struct SurvivesFirstStep;

impl Predicate<TmProgram> for SurvivesFirstStep {
    fn label(&self) -> &str {
        "no-halt-no-repeat-at-step-1"
    }

    fn test(&self, program: &TmProgram) -> bool {
        matches!(simulate(program, 1).kind, RunKind::Crashed | RunKind::FuelExhausted)
    }
}
