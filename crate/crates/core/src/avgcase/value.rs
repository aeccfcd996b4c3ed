use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::numeric::{big_pow, ln_ratio, ratio_to_f64};

/// A nonnegative function value, kept exact. Powers of two get their own
/// variant so values like `2^(2^n)` stay representable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Rational(BigRational),
    PowerOfTwo(BigUint),
}

impl Value {
    pub fn int(v: u64) -> Self {
        Value::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn pow2(exponent: impl Into<BigUint>) -> Self {
        Value::PowerOfTwo(exponent.into())
    }

    pub fn ln(&self) -> f64 {
        match self {
            Value::Rational(r) => ln_ratio(r),
            Value::PowerOfTwo(e) => e.to_f64().unwrap_or(f64::INFINITY) * std::f64::consts::LN_2,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Rational(r) => ratio_to_f64(r),
            Value::PowerOfTwo(_) => self.ln().exp(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Value::Rational(r) => Some(r),
            Value::PowerOfTwo(_) => None,
        }
    }

    /// Exact comparison with a nonnegative rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        match self {
            Value::Rational(v) => v.cmp(r),
            Value::PowerOfTwo(e) => {
                if !r.is_positive() {
                    return Ordering::Greater;
                }
                let num = r.numer().magnitude();
                let den = r.denom().magnitude();
                // 2^e > num >= num/den once e reaches the bit length of num
                if *e >= BigUint::from(num.bits()) {
                    return Ordering::Greater;
                }
                let e = e.to_u64().expect("below a bit length");
                (den << e).cmp(num)
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rational(r) => write!(f, "{r}"),
            Value::PowerOfTwo(e) => write!(f, "2^{e}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `coefficient * n^degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub coefficient: u64,
    pub degree: u32,
}

impl Monomial {
    pub fn new(coefficient: u64, degree: u32) -> Self {
        Self { coefficient, degree }
    }

    pub fn eval(&self, n: u64) -> BigUint {
        big_pow(n, self.degree as u64) * self.coefficient
    }

    pub fn eval_rational(&self, n: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(self.eval(n)))
    }

    /// Smallest `n0 >= 1` with `2^n > p(n)` for every `n >= n0` up to
    /// `scan` (a polynomial is eventually dominated, so a generous scan
    /// finds the true crossover).
    pub fn power_of_two_crossover(&self, scan: u64) -> u64 {
        let mut last_fail = 0;
        for n in 1..=scan {
            if BigUint::one() << n <= self.eval(n) {
                last_fail = n;
            }
        }
        last_fail + 1
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.coefficient, self.degree) {
            (c, 0) => write!(f, "{c}"),
            (1, d) => write!(f, "n^{d}"),
            (c, d) => write!(f, "{c}*n^{d}"),
        }
    }
}

/// `{c * n^j : j <= 12, c in {1, 10, 100}}`.
pub fn default_polynomial_family() -> Vec<Monomial> {
    [1, 10, 100].into_iter().flat_map(|c| (0..=12).map(move |d| Monomial::new(c, d))).collect()
}
