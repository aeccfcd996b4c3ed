use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{DensityError, FrequencySeries};
use crate::numeric;

/// Finite-horizon reading of how fast a frequency series approaches its
/// presumed limit. None of these labels asserts a limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    ConsistentWithSuperpolynomial,
    ConsistentWithExponential,
    Inconclusive,
    Incompatible,
}

impl Classification {
    /// Exponential decay is in particular superpolynomial.
    pub fn is_superpolynomial(self) -> bool {
        matches!(self, Self::ConsistentWithExponential | Self::ConsistentWithSuperpolynomial)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub min_points: usize,
    /// The exponential-fit slope must be below `-decrease_slope` for the
    /// residuals to count as decreasing.
    pub decrease_slope: f64,
    /// A power-law-shaped tail counts as superpolynomial only if the last
    /// local log-log slope is this many times steeper than the first.
    pub steepening_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { min_points: 4, decrease_slope: 1e-9, steepening_factor: 1.25 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub rss: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub n: u64,
    pub residual: f64,
    /// `ln |α − δ(n)|`, computed from the exact rational when available so
    /// that residuals below `f64` range still carry a slope.
    pub ln_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub target: f64,
    pub residuals: Vec<Residual>,
    pub classification: Classification,
    /// `ln r` against `n`.
    pub exponential_fit: Option<Fit>,
    /// `ln r` against `ln n`.
    pub power_fit: Option<Fit>,
    pub horizon: u64,
    pub notes: Vec<String>,
}

/// Heuristic convergence-rate classification of `series` toward `target`.
pub fn classify_convergence(
    series: &FrequencySeries,
    target: f64,
    tolerances: &Tolerances,
) -> Result<ConvergenceReport, DensityError> {
    let points = &series.points;
    if points.len() < tolerances.min_points.max(2) {
        return Err(DensityError::TooFewPoints { got: points.len(), need: tolerances.min_points });
    }
    let exact_target = BigRational::from_float(target);
    let residuals: Vec<Residual> = points
        .iter()
        .map(|p| {
            let (residual, ln_residual) = match (p.estimate.as_exact(), &exact_target) {
                (Some(value), Some(t)) => {
                    let r = (t - value).abs();
                    (numeric::ratio_to_f64(&r), numeric::ln_ratio(&r))
                }
                _ => {
                    let r = (target - p.value()).abs();
                    (r, r.ln())
                }
            };
            Residual { n: p.n, residual, ln_residual }
        })
        .collect();
    let horizon = points.last().expect("nonempty").n;
    let mut notes = vec![format!("finite-horizon heuristic over n <= {horizon}")];

    let usable: Vec<&Residual> = residuals.iter().filter(|r| r.ln_residual.is_finite()).collect();
    let report = |classification, exponential_fit, power_fit, notes| ConvergenceReport {
        target,
        residuals: residuals.clone(),
        classification,
        exponential_fit,
        power_fit,
        horizon,
        notes,
    };
    if usable.is_empty() {
        notes.push("residual is exactly zero at every point; rate is infinite".into());
        return Ok(report(Classification::ConsistentWithExponential, None, None, notes));
    }
    if usable.len() < residuals.len() {
        notes.push(format!("{} zero residual(s) excluded from fits", residuals.len() - usable.len()));
    }
    if usable.len() < 3 || usable.iter().any(|r| r.n == 0) {
        notes.push("not enough positive residuals at n >= 1 to fit".into());
        return Ok(report(Classification::Inconclusive, None, None, notes));
    }

    let ns: Vec<f64> = usable.iter().map(|r| r.n as f64).collect();
    let ln_ns: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = usable.iter().map(|r| r.ln_residual).collect();
    let (es, ei, erss) = numeric::linear_fit(&ns, &ys);
    let (ps, pi, prss) = numeric::linear_fit(&ln_ns, &ys);
    let exponential = Some(Fit { slope: es, intercept: ei, rss: erss });
    let power = Some(Fit { slope: ps, intercept: pi, rss: prss });

    let classification = if es >= -tolerances.decrease_slope {
        notes.push("residuals fail to decrease".into());
        Classification::Incompatible
    } else if erss <= prss {
        Classification::ConsistentWithExponential
    } else {
        let local = |i: usize, j: usize| (ys[j] - ys[i]) / (ln_ns[j] - ln_ns[i]);
        let first = local(0, 1);
        let last = local(ys.len() - 2, ys.len() - 1);
        if first < 0.0 && last < first * tolerances.steepening_factor {
            Classification::ConsistentWithSuperpolynomial
        } else {
            notes.push(format!("power-law decay with exponent about {ps:.3}"));
            Classification::Incompatible
        }
    };
    Ok(report(classification, exponential, power, notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{FrequencyPoint, Geometry};
    use num_bigint::BigUint;
    use num_traits::One;

    fn exact_series(points: Vec<(u64, BigUint, BigUint)>) -> FrequencySeries {
        FrequencySeries::new(
            Geometry::Sphere,
            "constructed",
            points.into_iter().map(|(n, h, t)| FrequencyPoint::exact(n, h, t)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn one_minus_two_to_minus_n_is_exponential() {
        let s = exact_series(
            (1..=12u64).map(|n| {
                let den = BigUint::one() << n;
                (n, &den - 1u32, den)
            }).collect(),
        );
        let r = classify_convergence(&s, 1.0, &Tolerances::default()).unwrap();
        assert_eq!(r.classification, Classification::ConsistentWithExponential);
        let fit = r.exponential_fit.unwrap();
        assert!((fit.slope + std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(r.horizon, 12);
    }

    #[test]
    fn one_minus_one_over_n_is_incompatible() {
        let s = exact_series((2..=20u64).map(|n| (n, BigUint::from(n - 1), BigUint::from(n))).collect());
        let r = classify_convergence(&s, 1.0, &Tolerances::default()).unwrap();
        assert_eq!(r.classification, Classification::Incompatible);
        assert!((r.power_fit.unwrap().slope + 1.0).abs() < 1e-9);
    }

    #[test]
    fn superpolynomial_but_subexponential() {
        // residual n^{-ln n}: faster than any power, slower than geometric
        let points = (1..=7u32)
            .map(|i| {
                let n = 1u64 << i;
                let mut p = FrequencyPoint::sampled(n, 1, 1, 0.99);
                p.estimate = crate::density::Estimate::Real(1.0 - (-(n as f64).ln().powi(2)).exp());
                p
            })
            .collect();
        let s = FrequencySeries::new(Geometry::Sphere, "c", points).unwrap();
        let r = classify_convergence(&s, 1.0, &Tolerances::default()).unwrap();
        assert_eq!(r.classification, Classification::ConsistentWithSuperpolynomial);
    }

    #[test]
    fn all_zero_residuals() {
        let s = exact_series((1..=4u64).map(|n| (n, BigUint::from(3u32), BigUint::from(3u32))).collect());
        let r = classify_convergence(&s, 1.0, &Tolerances::default()).unwrap();
        assert_eq!(r.classification, Classification::ConsistentWithExponential);
        assert!(r.notes.iter().any(|n| n.contains("infinite")));
    }

    #[test]
    fn growing_residuals_incompatible() {
        let s = exact_series((1..=5u64).map(|n| (n, BigUint::from(10 - n), BigUint::from(10u32))).collect());
        let r = classify_convergence(&s, 1.0, &Tolerances::default()).unwrap();
        assert_eq!(r.classification, Classification::Incompatible);
    }

    #[test]
    fn needs_four_points() {
        let s = exact_series((1..=3u64).map(|n| (n, BigUint::from(1u32), BigUint::from(2u32))).collect());
        assert!(matches!(
            classify_convergence(&s, 1.0, &Tolerances::default()),
            Err(DensityError::TooFewPoints { got: 3, .. })
        ));
    }

    #[test]
    fn classification_is_deterministic() {
        let s = exact_series((3..=9u64).map(|n| (n, BigUint::from(n * n - 1), BigUint::from(n * n))).collect());
        let a = classify_convergence(&s, 1.0, &Tolerances::default()).unwrap();
        let b = classify_convergence(&s, 1.0, &Tolerances::default()).unwrap();
        assert_eq!(a, b);
    }
}
