use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::numeric::{big_pow, decimal};

/// Cardinality of the sphere of `n`-state programs, computed from the map
/// signature, alongside the closed form `(4n)^{2n}` that is often quoted
/// for it. The two differ: each entry has `4(n+1)` possible targets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereCount {
    pub n: u64,
    #[serde(with = "decimal")]
    pub direct: BigUint,
    #[serde(with = "decimal")]
    pub quoted_closed_form: BigUint,
    pub agrees: bool,
}

pub fn sphere_count(n: u64) -> SphereCount {
    assert!(n >= 1, "programs have at least one non-halting state");
    let direct = big_pow(4 * (n + 1), 2 * n);
    let quoted_closed_form = big_pow(4 * n, 2 * n);
    let agrees = direct == quoted_closed_form;
    SphereCount { n, direct, quoted_closed_form, agrees }
}

/// Fraction of `n`-state programs that at their first step neither halt
/// nor repeat a state: `1/2 + (1/2)(n-1)/(n+1)`. Half move left and crash;
/// the other half move right into one of `n + 1` states, `n - 1` of them new.
pub fn first_step_survival(n: u64) -> BigRational {
    assert!(n >= 1);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let fresh = BigRational::new(BigInt::from(n - 1), BigInt::from(n + 1));
    &half + &half * fresh
}

/// Fraction of the `2^k` simple random walks of length `k` from 0 that never
/// go negative: `C(k, ⌊k/2⌋) / 2^k`.
pub fn nonneg_walk_fraction(k: u64) -> BigRational {
    let paths: BigUint = binomial(BigUint::from(k), BigUint::from(k / 2));
    BigRational::new(BigInt::from(paths), BigInt::from(BigUint::one() << k))
}

/// Largest `k` accepted by [`nonneg_walk_fraction_enumerated`].
pub const WALK_ENUMERATION_MAX: u64 = 26;

/// The same fraction by walking all `2^k` step sequences.
pub fn nonneg_walk_fraction_enumerated(k: u64) -> Option<BigRational> {
    if k > WALK_ENUMERATION_MAX {
        return None;
    }
    let mut good = 0u64;
    for steps in 0..1u64 << k {
        let mut pos = 0i64;
        let mut ok = true;
        for i in 0..k {
            pos += if steps >> i & 1 == 1 { 1 } else { -1 };
            if pos < 0 {
                ok = false;
                break;
            }
        }
        good += ok as u64;
    }
    Some(BigRational::new(BigInt::from(good), BigInt::from(1u64 << k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sphere_counts() {
        let one = sphere_count(1);
        assert_eq!(one.direct, BigUint::from(64u32));
        assert_eq!(one.quoted_closed_form, BigUint::from(16u32));
        assert!(!one.agrees);
        assert_eq!(sphere_count(2).direct, BigUint::from(20736u32));
    }

    #[test]
    fn survival_closed_form() {
        assert_eq!(first_step_survival(1), r(1, 2));
        assert_eq!(first_step_survival(2), r(2, 3));
        let mut prev = first_step_survival(1);
        for n in 2..200 {
            let cur = first_step_survival(n);
            assert!(cur > prev && cur < r(1, 1));
            prev = cur;
        }
    }

    #[test]
    fn walk_fraction_small_values() {
        assert_eq!(nonneg_walk_fraction(0), r(1, 1));
        assert_eq!(nonneg_walk_fraction(2), r(1, 2));
        assert_eq!(nonneg_walk_fraction(3), r(3, 8));
        assert!(nonneg_walk_fraction(100) < nonneg_walk_fraction(10));
        assert!(nonneg_walk_fraction(10) < nonneg_walk_fraction(2));
    }

    #[test]
    fn walk_fraction_matches_enumeration() {
        for k in 0..=16 {
            assert_eq!(Some(nonneg_walk_fraction(k)), nonneg_walk_fraction_enumerated(k), "k = {k}");
        }
        assert_eq!(nonneg_walk_fraction_enumerated(WALK_ENUMERATION_MAX + 1), None);
    }
}
