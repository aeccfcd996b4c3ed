use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::DensityError;

/// Which stratum a frequency is measured over: the sphere `I_n` of inputs
/// of size exactly `n`, or the ball `B_n` of inputs of size at most `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Sphere,
    Ball,
}

impl std::fmt::Display for Geometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Geometry::Sphere => "sphere",
            Geometry::Ball => "ball",
        })
    }
}

/// Boxed element stream returned by [`SizedDomain::enumerate_sphere`].
pub type ElementStream<'a, E> = Box<dyn Iterator<Item = E> + Send + 'a>;

/// A set of inputs stratified by a size function.
///
/// Spheres must be finite. Enumeration and sampling are optional
/// capabilities: the defaults report them as unavailable.
pub trait SizedDomain: Sync {
    type Element: Send;

    fn size_of(&self, element: &Self::Element) -> u64;

    /// Smallest radius that can hold elements. Balls start here.
    fn min_radius(&self) -> u64 {
        0
    }

    /// Exact sphere cardinality, or `None` when unknown.
    fn sphere_count(&self, n: u64) -> Option<BigUint>;

    fn enumerate_sphere(&self, n: u64) -> Result<ElementStream<'_, Self::Element>, DensityError> {
        Err(DensityError::EnumerationUnavailable { n })
    }

    fn sample_sphere(&self, n: u64, _rng: &mut dyn RngCore) -> Result<Self::Element, DensityError> {
        Err(DensityError::SamplerUnavailable { n })
    }
}

/// A set `R` of inputs, identified by a label for reporting.
pub trait Predicate<E>: Sync {
    fn label(&self) -> &str;

    fn test(&self, element: &E) -> bool;

    /// Exact `|R ∩ I_n|` when a closed form is known. Exact-mode frequency
    /// prefers this over enumeration.
    fn sphere_hits(&self, _n: u64) -> Option<BigUint> {
        None
    }
}

/// Predicate backed by a closure.
pub struct FnPredicate<F> {
    label: String,
    test: F,
}

impl<F> FnPredicate<F> {
    pub fn new(label: impl Into<String>, test: F) -> Self {
        Self { label: label.into(), test }
    }
}

impl<E, F> Predicate<E> for FnPredicate<F>
where
    F: Fn(&E) -> bool + Sync,
{
    fn label(&self) -> &str {
        &self.label
    }

    fn test(&self, element: &E) -> bool {
        (self.test)(element)
    }
}

/// The always-true predicate.
pub struct Everything;

impl<E> Predicate<E> for Everything {
    fn label(&self) -> &str {
        "true"
    }

    fn test(&self, _element: &E) -> bool {
        true
    }
}

/// Uniform big integer in `[0, bound)` by rejection on random bits.
pub(crate) fn uniform_below(bound: &BigUint, rng: &mut dyn RngCore) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    if let Some(b) = bound.to_u64() {
        return BigUint::from(rng.random_range(0..b));
    }
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let excess = (words as u64) * 32 - bits;
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        if let Some(top) = digits.last_mut() {
            *top >>= excess;
        }
        let candidate = BigUint::new(digits);
        if &candidate < bound {
            return candidate;
        }
    }
}

/// Binary words `{0,1}^*` with size = length.
#[derive(Clone, Debug)]
pub struct BinaryWords {
    enumeration_cap: u64,
}

pub type BinaryWord = Vec<u8>;

impl BinaryWords {
    pub const DEFAULT_CAP: u64 = 1 << 22;

    pub fn new() -> Self {
        Self { enumeration_cap: Self::DEFAULT_CAP }
    }

    pub fn with_cap(enumeration_cap: u64) -> Self {
        Self { enumeration_cap }
    }
}

impl Default for BinaryWords {
    fn default() -> Self {
        Self::new()
    }
}

impl SizedDomain for BinaryWords {
    type Element = BinaryWord;

    fn size_of(&self, element: &BinaryWord) -> u64 {
        element.len() as u64
    }

    fn sphere_count(&self, n: u64) -> Option<BigUint> {
        Some(BigUint::one() << n)
    }

    fn enumerate_sphere(&self, n: u64) -> Result<ElementStream<'_, BinaryWord>, DensityError> {
        if n >= 63 || (1u64 << n) > self.enumeration_cap {
            return Err(DensityError::CapExceeded {
                n,
                count: (BigUint::one() << n).to_string(),
                cap: self.enumeration_cap,
            });
        }
        let len = n as usize;
        Ok(Box::new((0..1u64 << n).map(move |bits| {
            (0..len).map(|i| ((bits >> (len - 1 - i)) & 1) as u8).collect()
        })))
    }

    fn sample_sphere(&self, n: u64, rng: &mut dyn RngCore) -> Result<BinaryWord, DensityError> {
        Ok((0..n).map(|_| rng.random_range(0..2u8)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::RngState;

    #[test]
    fn binary_sphere_enumeration_matches_count() {
        let domain = BinaryWords::new();
        for n in 0..8 {
            let words: Vec<_> = domain.enumerate_sphere(n).unwrap().collect();
            assert_eq!(BigUint::from(words.len()), domain.sphere_count(n).unwrap());
            assert!(words.iter().all(|w| domain.size_of(w) == n));
        }
    }

    #[test]
    fn binary_enumeration_is_lexicographic() {
        let words: Vec<_> = BinaryWords::new().enumerate_sphere(2).unwrap().collect();
        assert_eq!(words, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn binary_enumeration_cap() {
        let err = BinaryWords::with_cap(100).enumerate_sphere(7).err().unwrap();
        assert!(matches!(err, DensityError::CapExceeded { n: 7, .. }));
    }

    #[test]
    fn uniform_below_stays_in_range() {
        let mut rng = RngState::new(5).rng();
        let bound = (BigUint::one() << 100u32) + 12345u32;
        for _ in 0..200 {
            assert!(uniform_below(&bound, &mut rng) < bound);
        }
        let small = BigUint::from(3u32);
        let mut seen = [0usize; 3];
        for _ in 0..300 {
            seen[uniform_below(&small, &mut rng).to_usize().unwrap()] += 1;
        }
        assert!(seen.iter().all(|&c| c > 50));
    }
}
