use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::clause::{core_clauses, parse_instance, Cnf3Instance, Sym};
use super::dfa::{build_all_present_dfa, build_counting_dfa, CountingDfa};
use super::sat::core_mask;
use crate::density::{
    uniform_below, DensityError, ElementStream, FrequencyPoint, FrequencySeries, Geometry, Predicate, SizedDomain,
};

/// Longest length accepted by the exact density routines.
pub const MAX_EXACT_LENGTH: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityRoute {
    /// One product automaton tracking which core clauses have occurred.
    MaskProduct,
    /// Alternating sum over the 255 nonempty sets of omitted core clauses.
    InclusionExclusion,
}

pub const ALL_EIGHT_LABEL: &str = "contains-all-eight-core-clauses";

/// Exact fraction of words of each length containing all eight core
/// clauses. Lengths must be increasing and carry at least one word.
pub fn all_eight_density_series(lengths: &[u64], route: DensityRoute) -> Result<FrequencySeries, DensityError> {
    let Some(&max) = lengths.iter().max() else {
        return FrequencySeries::new(Geometry::Sphere, ALL_EIGHT_LABEL, Vec::new());
    };
    if max > MAX_EXACT_LENGTH {
        return Err(DensityError::CapExceeded { n: max, count: max.to_string(), cap: MAX_EXACT_LENGTH });
    }
    let max = max as usize;
    let total = build_counting_dfa(&[]).word_counts(max);
    let hits = match route {
        DensityRoute::MaskProduct => build_all_present_dfa(&core_clauses()).word_counts(max),
        DensityRoute::InclusionExclusion => inclusion_exclusion(max, &total),
    };
    let points = lengths
        .iter()
        .map(|&n| {
            let t = &total[n as usize];
            if t.is_zero() {
                return Err(DensityError::AtRadius { n, source: Box::new(DensityError::EmptySphere { n }) });
            }
            Ok(FrequencyPoint::exact(n, hits[n as usize].clone(), t.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    FrequencySeries::new(Geometry::Sphere, ALL_EIGHT_LABEL, points)
}

/// Words omitting no core clause: `Σ_S (-1)^|S| N_S` over all subsets `S`,
/// `N_S` counting words avoiding every clause in `S`.
fn inclusion_exclusion(max: usize, total: &[BigUint]) -> Vec<BigUint> {
    let core = core_clauses();
    let signed: Vec<Vec<BigInt>> = (1u32..256)
        .into_par_iter()
        .map(|subset| {
            let omitted: Vec<_> = (0..8).filter(|i| subset >> i & 1 == 1).map(|i| core[i].clone()).collect();
            let negative = omitted.len() % 2 == 1;
            build_counting_dfa(&omitted)
                .word_counts(max)
                .into_iter()
                .map(|c| if negative { -BigInt::from(c) } else { BigInt::from(c) })
                .collect()
        })
        .collect();
    (0..=max)
        .map(|len| {
            let sum: BigInt = BigInt::from(total[len].clone()) + signed.iter().map(|row| &row[len]).sum::<BigInt>();
            assert!(!sum.is_negative(), "inclusion-exclusion went negative");
            sum.to_biguint().expect("nonnegative")
        })
        .collect()
}

/// Instances of `(R∧)*` by rendered length, uniform on each sphere.
#[derive(Clone, Debug)]
pub struct ThreeSatDomain {
    dfa: CountingDfa,
    /// `suffix[r][s]`: accepted words of length `r` from state `s`.
    suffix: Vec<Vec<BigUint>>,
    enumeration_cap: u64,
}

impl ThreeSatDomain {
    pub const DEFAULT_CAP: u64 = 1_000_000;

    /// Supports radii up to `max_len`.
    pub fn new(max_len: u64) -> Self {
        let dfa = build_counting_dfa(&[]);
        let suffix = dfa.suffix_counts(max_len as usize);
        Self { dfa, suffix, enumeration_cap: Self::DEFAULT_CAP }
    }

    pub fn max_len(&self) -> u64 {
        self.suffix.len() as u64 - 1
    }

    fn in_range(&self, n: u64) -> Result<(), DensityError> {
        if n > self.max_len() {
            Err(DensityError::CapExceeded { n, count: "unknown".into(), cap: self.max_len() })
        } else {
            Ok(())
        }
    }
}

fn to_instance(word: &[Sym]) -> Cnf3Instance {
    let text: String = word.iter().map(|s| s.ascii()).collect();
    parse_instance(&text).expect("automaton accepts only instances")
}

impl SizedDomain for ThreeSatDomain {
    type Element = Cnf3Instance;

    fn size_of(&self, instance: &Cnf3Instance) -> u64 {
        instance.size()
    }

    fn sphere_count(&self, n: u64) -> Option<BigUint> {
        self.suffix.get(n as usize).map(|row| row[self.dfa.start()].clone())
    }

    fn enumerate_sphere(&self, n: u64) -> Result<ElementStream<'_, Cnf3Instance>, DensityError> {
        self.in_range(n)?;
        let count = &self.suffix[n as usize][self.dfa.start()];
        if *count > BigUint::from(self.enumeration_cap) {
            return Err(DensityError::CapExceeded { n, count: count.to_string(), cap: self.enumeration_cap });
        }
        let words = self.dfa.words_of_length(n as usize);
        Ok(Box::new(words.into_iter().map(|w| to_instance(&w))))
    }

    fn sample_sphere(&self, n: u64, rng: &mut dyn RngCore) -> Result<Cnf3Instance, DensityError> {
        self.in_range(n)?;
        let mut state = self.dfa.start();
        if self.suffix[n as usize][state].is_zero() {
            return Err(DensityError::EmptySphere { n });
        }
        let mut word = Vec::with_capacity(n as usize);
        for left in (1..=n as usize).rev() {
            let mut r = uniform_below(&self.suffix[left][state], rng);
            for sym in Sym::ALL {
                let next = self.dfa.next(state, sym);
                let weight = &self.suffix[left - 1][next];
                if r < *weight {
                    word.push(sym);
                    state = next;
                    break;
                }
                r -= weight;
            }
        }
        Ok(to_instance(&word))
    }
}

/// Instances on which [`super::algorithm_three`] answers `No`.
pub struct ContainsAllEight {
    hits: Option<Vec<BigUint>>,
}

impl ContainsAllEight {
    /// Membership test only.
    pub fn new() -> Self {
        Self { hits: None }
    }

    /// Also answers exact sphere counts up to `max_len` from the mask
    /// product automaton.
    pub fn with_counts(max_len: u64) -> Self {
        Self { hits: Some(build_all_present_dfa(&core_clauses()).word_counts(max_len as usize)) }
    }
}

impl Default for ContainsAllEight {
    fn default() -> Self {
        Self::new()
    }
}

impl Predicate<Cnf3Instance> for ContainsAllEight {
    fn label(&self) -> &str {
        ALL_EIGHT_LABEL
    }

    fn test(&self, instance: &Cnf3Instance) -> bool {
        core_mask(instance) == u8::MAX
    }

    fn sphere_hits(&self, n: u64) -> Option<BigUint> {
        self.hits.as_ref().and_then(|h| h.get(n as usize).cloned())
    }
}
