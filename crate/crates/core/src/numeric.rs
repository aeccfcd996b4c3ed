//! Small numeric helpers shared by the counting and estimation code.
//!
//! Counts in this crate routinely exceed `f64` range (sphere sizes like
//! `(4(n+1))^{2n}` at `n = 10^4`), so logarithms are taken from the bit
//! representation rather than by converting to floating point first.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use statrs::distribution::{ContinuousCDF, Normal};

/// Natural log of a big unsigned integer. Returns `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits in 64 bits") as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("top 64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational; `-inf` for zero, NaN for negatives.
pub fn ln_ratio(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    if x.is_negative() {
        return f64::NAN;
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    ln_biguint(num) - ln_biguint(den)
}

/// Decimal value of a rational, accurate even when numerator and
/// denominator individually overflow `f64`.
pub fn ratio_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    let shift = num.bits().max(den.bits()).saturating_sub(1000);
    let (n, d) = ((num >> shift).to_f64(), (den >> shift).to_f64());
    match (n, d) {
        (Some(n), Some(d)) if d > 0.0 && n.is_finite() && d.is_finite() && (n / d).is_finite() && n > 0.0 => {
            sign * (n / d)
        }
        _ => sign * ln_ratio(&x.abs()).exp(),
    }
}

/// Rational `num / den` from unsigned counts.
pub fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// Numerically stable `ln(e^a + e^b)`.
pub fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ e^{x_i}` over an iterator; `-inf` for an empty input.
pub fn ln_sum_exp<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let xs: Vec<f64> = terms.into_iter().collect();
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max == f64::INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Two-sided standard normal critical value for the given confidence.
pub fn normal_quantile(confidence: f64) -> f64 {
    let normal = Normal::standard();
    normal.inverse_cdf(0.5 + confidence / 2.0)
}

/// Ordinary least squares fit `y = slope * x + intercept`, returning
/// `(slope, intercept, residual sum of squares)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = my - slope * mx;
    let rss = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    (slope, intercept, rss)
}

/// `base^exp` as a big integer.
pub fn big_pow(base: u64, exp: u64) -> BigUint {
    num_traits::pow::pow(BigUint::from(base), exp as usize)
}

/// `1 + k + ... + k^n` when `from_zero`, otherwise `k + ... + k^n`.
pub fn geometric_sum(k: u64, n: u64, from_zero: bool) -> BigUint {
    let mut total = BigUint::zero();
    let mut term = BigUint::one();
    for i in 0..=n {
        if i > 0 || from_zero {
            total += &term;
        }
        term *= k;
    }
    total
}

pub(crate) mod decimal {
    //! Serde adapter: big integers as decimal strings.
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
