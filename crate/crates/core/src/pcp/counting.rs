use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{pow, Zero};
use serde::{Deserialize, Serialize};

use crate::numeric::{decimal, geometric_sum};

/// Sphere cardinality `(k + .. + k^n)^{2n}` over nonempty words, with the
/// closed form `(1 + k + .. + k^n)^{2n}` that also counts empty words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereCount {
    pub n: u64,
    pub k: u64,
    #[serde(with = "decimal")]
    pub direct: BigUint,
    #[serde(with = "decimal")]
    pub quoted_closed_form: BigUint,
    pub agrees: bool,
}

/// Number of nonempty words of length at most `n`.
pub fn word_count(n: u64, k: u64) -> BigUint {
    geometric_sum(k, n, false)
}

pub fn sphere_count(n: u64, k: u64) -> SphereCount {
    assert!(n >= 1 && k >= 2);
    let direct = pow(word_count(n, k), 2 * n as usize);
    let quoted_closed_form = pow(geometric_sum(k, n, true), 2 * n as usize);
    let agrees = direct == quoted_closed_form;
    SphereCount { n, k, direct, quoted_closed_form, agrees }
}

/// Upper bound `2n(n+1) / (1 + k + .. + k^n)` on the fraction of the sphere
/// with some prefix-related pair. Exceeds 1 (vacuous) for small `n`.
pub fn prefix_pair_bound(n: u64, k: u64) -> BigRational {
    assert!(n >= 1);
    BigRational::new(BigInt::from(2 * n * (n + 1)), BigInt::from(geometric_sum(k, n, true)))
}

/// Ordered pairs `(u, v)` of nonempty words of length at most `n` with one
/// a prefix of the other: each `v` of length `l` has `l` nonempty prefixes,
/// counted in both directions, minus the doubly counted `u = v`.
pub fn prefix_related_pairs(n: u64, k: u64) -> BigUint {
    let mut one_way = BigUint::zero();
    let mut words = BigUint::from(1u32);
    for len in 1..=n {
        words *= k;
        one_way += &words * len;
    }
    one_way * 2u32 - word_count(n, k)
}

/// Instances in the sphere of radius `n` with no prefix-related pair:
/// pairs are independent, so this is `(W^2 - P)^n`.
pub fn no_prefix_count(n: u64, k: u64) -> BigUint {
    let w = word_count(n, k);
    pow(&w * &w - prefix_related_pairs(n, k), n as usize)
}
