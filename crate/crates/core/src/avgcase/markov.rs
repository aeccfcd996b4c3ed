use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{pow, Zero};
use serde::Serialize;

use super::measured::MeasuredFunction;
use super::value::Monomial;
use super::AvgError;
use crate::density::{DensityError, FrequencyPoint, FrequencySeries, Geometry};
use crate::numeric::{ln_ratio, ln_sum_exp, ratio_to_f64};

/// The generic bound `n ↦ (c·q(n)·n)^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkovBound {
    #[serde(serialize_with = "display")]
    pub c: BigRational,
    pub k: u32,
    pub q: Monomial,
}

fn display<S: serde::Serializer, T: std::fmt::Display>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl MarkovBound {
    /// The threshold before the `k`-th power: `c·q(n)·n`.
    pub fn root(&self, n: u64) -> BigRational {
        &self.c * self.q.eval_rational(n) * BigRational::from_integer(BigInt::from(n))
    }

    pub fn eval(&self, n: u64) -> BigRational {
        pow(self.root(n), self.k as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkovPoint {
    pub n: u64,
    /// `∫_{I_n} f^{1/k} dμ_n`.
    pub premise_expectation: f64,
    /// `μ_n` of `{f ≥ (c·q(n)·n)^k}` on sphere `n`.
    #[serde(serialize_with = "display")]
    pub violation_mass: BigRational,
    #[serde(serialize_with = "display")]
    pub limit: BigRational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkovReport {
    pub function: String,
    pub bound: MarkovBound,
    pub points: Vec<MarkovPoint>,
    /// Violation masses as exact frequencies (numerator over denominator).
    pub series: FrequencySeries,
}

impl MarkovReport {
    pub fn all_hold(&self) -> bool {
        self.points.iter().all(|p| p.holds)
    }
}

/// Checks the sphere-expectation premise `∫_{I_n} f^{1/k} dμ_n ≤ c·n` at
/// each tested `n`, then measures the set where `f` reaches the bound.
/// The premise is compared exactly when `k = 1` and all values are
/// rational, otherwise in floating point with relative slack `1e-12`.
pub fn markov_generic_bound(
    mf: &MeasuredFunction,
    c: BigRational,
    k: u32,
    q: Monomial,
    n_list: &[u64],
) -> Result<MarkovReport, AvgError> {
    assert!(k >= 1);
    let bound = MarkovBound { c, k, q };
    let mut points = Vec::new();
    let mut freq = Vec::new();
    for &n in n_list {
        if n == 0 {
            return Err(AvgError::Density(DensityError::EmptySphere { n }));
        }
        let atoms = mf.sphere(n);
        let total = atoms.iter().map(|a| a.mass()).fold(BigRational::zero(), |s, m| s + m);
        if total.is_zero() {
            return Err(AvgError::EmptySphere { n });
        }
        let cn = &bound.c * BigRational::from_integer(BigInt::from(n));

        let exact_premise = if k == 1 {
            atoms
                .iter()
                .map(|a| a.value.as_rational().map(|v| v * a.mass()))
                .collect::<Option<Vec<_>>>()
                .map(|terms| terms.into_iter().fold(BigRational::zero(), |s, t| s + t) / &total)
        } else {
            None
        };
        let (expectation, premise_ok) = match &exact_premise {
            Some(e) => (ratio_to_f64(e), *e <= cn),
            None => {
                let ln_e = ln_sum_exp(atoms.iter().map(|a| ln_ratio(&a.mass()) + a.value.ln() / k as f64))
                    - ln_ratio(&total);
                let e = ln_e.exp();
                (e, e <= ratio_to_f64(&cn) * (1.0 + 1e-12))
            }
        };
        if !premise_ok {
            return Err(AvgError::PremiseViolated { n, expectation, bound: ratio_to_f64(&cn) });
        }

        let threshold = bound.eval(n);
        let violating = atoms
            .iter()
            .filter(|a| a.value.cmp_rational(&threshold).is_ge())
            .map(|a| a.mass())
            .fold(BigRational::zero(), |s, m| s + m);
        let violation_mass = violating / &total;
        let limit = bound.q.eval_rational(n).recip();
        let holds = violation_mass <= limit;
        freq.push(FrequencyPoint::exact(
            n,
            to_biguint(violation_mass.numer()),
            to_biguint(violation_mass.denom()),
        ));
        points.push(MarkovPoint { n, premise_expectation: expectation, violation_mass, limit, holds });
    }
    let series = FrequencySeries::new(Geometry::Sphere, "markov-violation-set", freq)?;
    Ok(MarkovReport { function: mf.label().to_string(), bound, points, series })
}

fn to_biguint(x: &BigInt) -> BigUint {
    x.to_biguint().expect("masses are nonnegative")
}
