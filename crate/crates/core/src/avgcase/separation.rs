use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::checks::{levin_check, AvgReport, AvgTolerances, AvgVerdict};
use super::measured::MeasuredFunction;
use super::value::{default_polynomial_family, Monomial};
use super::AvgError;
use crate::density::{
    classify_convergence, ConvergenceReport, FrequencyPoint, FrequencySeries, Geometry, Tolerances,
};

/// How far to scan for the point past which `2^n > p(n)`.
pub const CROSSOVER_SCAN: u64 = 4096;

/// Sphere frequencies of `{f ≤ p(σ)}` and whether they tend to 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolynomialCheck {
    pub polynomial: Monomial,
    pub polynomial_text: String,
    pub series: FrequencySeries,
    pub convergence: ConvergenceReport,
    /// The generic test passes when the frequencies approach 1
    /// superpolynomially fast over the tested radii.
    pub passes: bool,
}

/// Counting frequency of `{x ∈ I_n : f(x) ≤ p(n)}` on each sphere.
pub fn generic_bound_check(mf: &MeasuredFunction, p: Monomial, n_list: &[u64]) -> Result<PolynomialCheck, AvgError> {
    let mut points = Vec::new();
    for &n in n_list {
        let atoms = mf.sphere(n);
        let total: BigUint = atoms.iter().map(|a| &a.count).sum();
        if total.is_zero() {
            return Err(AvgError::EmptySphere { n });
        }
        let limit = p.eval_rational(n);
        let hits: BigUint = atoms.iter().filter(|a| a.value.cmp_rational(&limit).is_le()).map(|a| &a.count).sum();
        points.push(FrequencyPoint::exact(n, hits, total));
    }
    let series = FrequencySeries::new(Geometry::Sphere, format!("f <= {p}"), points)?;
    let convergence = classify_convergence(&series, 1.0, &Tolerances::default())?;
    let passes = convergence.classification.is_superpolynomial();
    Ok(PolynomialCheck { polynomial: p, polynomial_text: p.to_string(), series, convergence, passes })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossoverCheck {
    pub check: PolynomialCheck,
    /// First `n` past which `2^n > p(n)`.
    pub crossover: u64,
    /// Every tested sphere at or past the crossover has frequency 0.
    pub zero_past_crossover: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    pub n_list: Vec<u64>,
    /// `2^|w|` under `2^(-2|w|-1)` at `ε = 1/2`.
    pub example_levin: AvgReport,
    pub example_generic: Vec<CrossoverCheck>,
    /// Polynomials in the family for which the spiked function passes.
    pub spiked_generic: Vec<PolynomialCheck>,
    pub spiked_levin: AvgReport,
    /// Polynomial on average and not generically polynomial.
    pub avp_not_genp: bool,
    /// Generically polynomial and not polynomial on average at the tested ε.
    pub genp_not_avp: bool,
}

/// Both directions of the incomparability of average-case and generic
/// polynomial time, on the example function and the spiked function,
/// over the default polynomial family.
pub fn separation_report(n_list: &[u64], tol: &AvgTolerances) -> Result<SeparationReport, AvgError> {
    let horizon = *n_list.iter().max().ok_or(AvgError::EmptyList)?;
    let example = MeasuredFunction::levin_example();
    let spiked = MeasuredFunction::spiked_example();
    let family = default_polynomial_family();

    let example_levin = levin_check(&example, 0.5, horizon, tol);
    let example_generic = family
        .iter()
        .map(|&p| {
            let check = generic_bound_check(&example, p, n_list)?;
            let crossover = p.power_of_two_crossover(CROSSOVER_SCAN);
            let zero_past_crossover =
                check.series.points.iter().filter(|pt| pt.n >= crossover).all(|pt| pt.hits.is_zero());
            Ok(CrossoverCheck { check, crossover, zero_past_crossover })
        })
        .collect::<Result<Vec<_>, AvgError>>()?;

    let spiked_generic = family
        .iter()
        .map(|&p| generic_bound_check(&spiked, p, n_list))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|c| c.passes)
        .collect::<Vec<_>>();
    let spiked_levin = levin_check(&spiked, 0.5, horizon, tol);

    let avp_not_genp = example_levin.verdict == AvgVerdict::ConvergesAtHorizon
        && example_generic.iter().all(|c| c.zero_past_crossover && !c.check.passes);
    let genp_not_avp = !spiked_generic.is_empty() && spiked_levin.verdict == AvgVerdict::DivergesAtHorizon;
    Ok(SeparationReport { n_list: n_list.to_vec(), example_levin, example_generic, spiked_generic, spiked_levin, avp_not_genp, genp_not_avp })
}

impl SeparationReport {
    pub fn incomparable(&self) -> bool {
        self.avp_not_genp && self.genp_not_avp
    }
}
