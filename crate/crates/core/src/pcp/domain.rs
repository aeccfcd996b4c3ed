use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, RngCore};

use super::counting::{no_prefix_count, sphere_count};
use super::instance::{has_prefix_pair, PcpInstance, Word};
use crate::density::{DensityError, ElementStream, Predicate, SizedDomain};

/// PCP instances over `k` letters; the sphere of radius `n` holds the
/// instances with `n` pairs of words of length between 1 and `n`, with the
/// uniform measure.
#[derive(Clone, Debug)]
pub struct PcpDomain {
    k: u8,
    enumeration_cap: u64,
}

impl PcpDomain {
    pub const DEFAULT_CAP: u64 = 10_000_000;

    pub fn new(k: u8) -> Self {
        assert!(k >= 2, "alphabet needs at least two letters");
        Self { k, enumeration_cap: Self::DEFAULT_CAP }
    }

    pub fn with_cap(k: u8, enumeration_cap: u64) -> Self {
        Self { enumeration_cap, ..Self::new(k) }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// Uniform nonempty word of length at most `n`: the length is
    /// `n - j` with `P(j) ∝ k^{-j}`, drawn as a truncated geometric by
    /// rejection, then letters are uniform.
    pub fn sample_word(&self, n: u64, rng: &mut dyn RngCore) -> Word {
        let k = self.k;
        let shortfall = loop {
            let mut j = 0u64;
            while rng.random_range(0..k) == 0 {
                j += 1;
                if j >= n {
                    break;
                }
            }
            if j < n {
                break j;
            }
        };
        (0..n - shortfall).map(|_| rng.random_range(0..k)).collect()
    }
}

/// All nonempty words of length at most `n`, by length then lexicographic.
fn words_up_to(k: u8, n: u64) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..k).map(move |c| {
                    let mut next = w.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

impl SizedDomain for PcpDomain {
    type Element = PcpInstance;

    fn size_of(&self, instance: &PcpInstance) -> u64 {
        instance.len() as u64
    }

    fn min_radius(&self) -> u64 {
        1
    }

    fn sphere_count(&self, n: u64) -> Option<BigUint> {
        Some(if n == 0 { BigUint::default() } else { sphere_count(n, self.k as u64).direct })
    }

    fn enumerate_sphere(&self, n: u64) -> Result<ElementStream<'_, PcpInstance>, DensityError> {
        if n == 0 {
            return Ok(Box::new(std::iter::empty()));
        }
        let count = sphere_count(n, self.k as u64).direct;
        if count.to_u64().is_none_or(|c| c > self.enumeration_cap) {
            return Err(DensityError::CapExceeded { n, count: count.to_string(), cap: self.enumeration_cap });
        }
        let words = words_up_to(self.k, n);
        let radix = words.len() as u64;
        let slots = 2 * n as u32;
        let k = self.k;
        Ok(Box::new((0..radix.pow(slots)).map(move |mut index| {
            let mut picks = vec![0usize; slots as usize];
            for slot in picks.iter_mut().rev() {
                *slot = (index % radix) as usize;
                index /= radix;
            }
            let pairs = picks.chunks(2).map(|c| (words[c[0]].clone(), words[c[1]].clone())).collect();
            PcpInstance::new(k, pairs).expect("enumerated words are valid")
        })))
    }

    fn sample_sphere(&self, n: u64, rng: &mut dyn RngCore) -> Result<PcpInstance, DensityError> {
        if n == 0 {
            return Err(DensityError::EmptySphere { n });
        }
        let pairs = (0..n).map(|_| (self.sample_word(n, rng), self.sample_word(n, rng))).collect();
        Ok(PcpInstance::new(self.k, pairs).expect("sampled words are valid"))
    }
}

/// Instances on which [`super::algorithm_two`] answers `No`.
pub struct NoPrefixPair {
    k: u64,
}

impl NoPrefixPair {
    pub fn new(k: u8) -> Self {
        Self { k: k as u64 }
    }
}

impl Predicate<PcpInstance> for NoPrefixPair {
    fn label(&self) -> &str {
        "no-prefix-pair"
    }

    fn test(&self, instance: &PcpInstance) -> bool {
        !has_prefix_pair(instance)
    }

    fn sphere_hits(&self, n: u64) -> Option<BigUint> {
        (n >= 1).then(|| no_prefix_count(n, self.k))
    }
}

/// Complement of [`NoPrefixPair`].
pub struct HasPrefixPair {
    k: u64,
}

impl HasPrefixPair {
    pub fn new(k: u8) -> Self {
        Self { k: k as u64 }
    }
}

impl Predicate<PcpInstance> for HasPrefixPair {
    fn label(&self) -> &str {
        "has-prefix-pair"
    }

    fn test(&self, instance: &PcpInstance) -> bool {
        has_prefix_pair(instance)
    }

    fn sphere_hits(&self, n: u64) -> Option<BigUint> {
        (n >= 1).then(|| sphere_count(n, self.k).direct - no_prefix_count(n, self.k))
    }
}
