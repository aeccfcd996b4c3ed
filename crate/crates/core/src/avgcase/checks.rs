use serde::{Deserialize, Serialize};

use super::measured::{Atom, MeasuredFunction};
use super::AvgError;
use crate::numeric::{ln_ratio, ln_sum_exp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    SpheresExpected,
    Levin,
    Impagliazzo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AvgVerdict {
    ConvergesAtHorizon,
    DivergesAtHorizon,
    PolynomiallyBoundedAtHorizon,
    UnboundedAtHorizon,
}

/// Verdict thresholds. Every verdict is a function of the reported numbers
/// and these values only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AvgTolerances {
    /// A partial sum above this counts as divergence.
    pub divergence_bound: f64,
    /// Tail increments must shrink at least by this factor per level.
    pub ratio_threshold: f64,
    /// Fraction of the levels forming the tail of the ratio test.
    pub tail_fraction: f64,
    /// Late normalized expectations may exceed the early maximum by this
    /// factor and still count as bounded.
    pub bounded_slack: f64,
}

impl Default for AvgTolerances {
    fn default() -> Self {
        Self { divergence_bound: 1e12, ratio_threshold: 0.9, tail_fraction: 0.25, bounded_slack: 2.0 }
    }
}

/// One size level. Logs are kept alongside the plain values, which
/// overflow to infinity long before the logs do.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AvgLevel {
    pub n: u64,
    /// Size-level contribution (Levin) or expectation (sphere, ball).
    pub term: f64,
    pub ln_term: f64,
    /// Running sum (Levin) or expectation divided by the polynomial scale.
    pub cumulative: f64,
    pub ln_cumulative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AvgReport {
    pub criterion: Criterion,
    pub function: String,
    pub epsilon: f64,
    pub k: Option<u32>,
    pub horizon: u64,
    pub levels: Vec<AvgLevel>,
    pub verdict: AvgVerdict,
    pub tolerances: AvgTolerances,
    pub notes: Vec<String>,
}

impl AvgReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,term,cumulative\n");
        for l in &self.levels {
            out.push_str(&format!("{},{:e},{:e}\n", l.n, l.term, l.ln_cumulative.exp()));
        }
        out
    }
}

/// `ln Σ mass · f^ε` over the atoms; `-inf` when everything vanishes.
fn ln_weighted_power(atoms: &[Atom], epsilon: f64) -> f64 {
    ln_sum_exp(atoms.iter().map(|a| ln_ratio(&a.mass()) + epsilon * a.value.ln()))
}

fn ln_mass(atoms: &[Atom]) -> f64 {
    ln_sum_exp(atoms.iter().map(|a| ln_ratio(&a.mass())))
}

/// `ln ∫_{I_n} f^ε dμ_n`.
fn ln_sphere_expectation(mf: &MeasuredFunction, n: u64, epsilon: f64) -> Result<f64, AvgError> {
    let atoms = mf.sphere(n);
    let mass = ln_mass(&atoms);
    if mass == f64::NEG_INFINITY {
        return Err(AvgError::EmptySphere { n });
    }
    Ok(ln_weighted_power(&atoms, epsilon) - mass)
}

/// `∫_{I_n} f dμ_n`; may be infinite in `f64`, see [`ln_expected_on_sphere`].
pub fn expected_on_sphere(mf: &MeasuredFunction, n: u64) -> Result<f64, AvgError> {
    ln_sphere_expectation(mf, n, 1.0).map(f64::exp)
}

pub fn ln_expected_on_sphere(mf: &MeasuredFunction, n: u64) -> Result<f64, AvgError> {
    ln_sphere_expectation(mf, n, 1.0)
}

fn level(n: u64, ln_term: f64, ln_cumulative: f64) -> AvgLevel {
    AvgLevel { n, term: ln_term.exp(), ln_term, cumulative: ln_cumulative.exp(), ln_cumulative }
}

/// Whether the normalized values `ln r_n` stay within `slack` of their
/// maximum over the first half.
fn bounded(ln_ratios: &[f64], slack: f64) -> bool {
    if ln_ratios.len() < 2 {
        return true;
    }
    let half = ln_ratios.len().div_ceil(2);
    let early = ln_ratios[..half].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    ln_ratios[half..].iter().all(|&r| r <= early + slack.ln())
}

/// Expected value of `f` on spheres against `n^k`: bounded when
/// `E_n / n^k` does not grow over `n_list`.
pub fn spheres_expected_report(
    mf: &MeasuredFunction,
    k: u32,
    n_list: &[u64],
    tol: &AvgTolerances,
) -> Result<AvgReport, AvgError> {
    let mut levels = Vec::new();
    for &n in n_list {
        let ln_e = ln_sphere_expectation(mf, n, 1.0)?;
        levels.push(level(n, ln_e, ln_e - k as f64 * (n.max(1) as f64).ln()));
    }
    let scaled: Vec<f64> = levels.iter().map(|l| l.ln_cumulative).collect();
    let verdict = if bounded(&scaled, tol.bounded_slack) {
        AvgVerdict::PolynomiallyBoundedAtHorizon
    } else {
        AvgVerdict::UnboundedAtHorizon
    };
    Ok(AvgReport {
        criterion: Criterion::SpheresExpected,
        function: mf.label().to_string(),
        epsilon: 1.0,
        k: Some(k),
        horizon: n_list.last().copied().unwrap_or(0),
        levels,
        verdict,
        tolerances: *tol,
        notes: vec!["cumulative holds E_n / n^k".into()],
    })
}

/// Partial sums of `Σ_x f(x)^ε σ(x)^{-1} μ(x)` by size up to `horizon`.
/// Size-0 elements are left out since `σ^{-1}` is undefined there.
pub fn levin_check(mf: &MeasuredFunction, epsilon: f64, horizon: u64, tol: &AvgTolerances) -> AvgReport {
    assert!(epsilon > 0.0);
    let mut levels = Vec::new();
    let mut running = f64::NEG_INFINITY;
    for n in mf.min_size().max(1)..=horizon {
        let ln_term = ln_weighted_power(&mf.sphere(n), epsilon) - (n as f64).ln();
        running = crate::numeric::ln_add(running, ln_term);
        levels.push(level(n, ln_term, running));
    }

    let exceeded = running > tol.divergence_bound.ln();
    let terms: Vec<f64> = levels.iter().map(|l| l.ln_term).collect();
    let tail_len = ((terms.len() as f64 * tol.tail_fraction).ceil() as usize).clamp(1, terms.len().max(1));
    let tail = &terms[terms.len().saturating_sub(tail_len + 1)..];
    // a level contributing nothing counts as shrinking
    let shrinking = tail.windows(2).all(|w| w[1] == f64::NEG_INFINITY || w[1] - w[0] <= tol.ratio_threshold.ln());
    let verdict = if !exceeded && shrinking {
        AvgVerdict::ConvergesAtHorizon
    } else {
        AvgVerdict::DivergesAtHorizon
    };
    let mut notes = vec!["size-0 elements excluded: sigma^-1 undefined there".to_string()];
    if exceeded {
        notes.push(format!("partial sum exceeds {:e}", tol.divergence_bound));
    } else if !shrinking {
        notes.push(format!("tail increments shrink slower than ratio {}", tol.ratio_threshold));
    }
    AvgReport {
        criterion: Criterion::Levin,
        function: mf.label().to_string(),
        epsilon,
        k: None,
        horizon,
        levels,
        verdict,
        tolerances: *tol,
        notes,
    }
}

/// Ball expectations `∫_{B_n} f^ε dμ_n` (weights normalized on each
/// ball), bounded when `E_n / n` does not grow over `n_list`.
pub fn impagliazzo_check(
    mf: &MeasuredFunction,
    epsilon: f64,
    n_list: &[u64],
    tol: &AvgTolerances,
) -> Result<AvgReport, AvgError> {
    assert!(epsilon > 0.0);
    let mut levels = Vec::new();
    let mut ln_num = f64::NEG_INFINITY;
    let mut ln_den = f64::NEG_INFINITY;
    let mut next = mf.min_size();
    for &n in n_list {
        while next <= n {
            let atoms = mf.sphere(next);
            ln_num = crate::numeric::ln_add(ln_num, ln_weighted_power(&atoms, epsilon));
            ln_den = crate::numeric::ln_add(ln_den, ln_mass(&atoms));
            next += 1;
        }
        if ln_den == f64::NEG_INFINITY {
            return Err(AvgError::EmptySphere { n });
        }
        let ln_e = ln_num - ln_den;
        levels.push(level(n, ln_e, ln_e - (n.max(1) as f64).ln()));
    }
    let scaled: Vec<f64> = levels.iter().map(|l| l.ln_cumulative).collect();
    let verdict = if bounded(&scaled, tol.bounded_slack) {
        AvgVerdict::PolynomiallyBoundedAtHorizon
    } else {
        AvgVerdict::UnboundedAtHorizon
    };
    Ok(AvgReport {
        criterion: Criterion::Impagliazzo,
        function: mf.label().to_string(),
        epsilon,
        k: None,
        horizon: n_list.last().copied().unwrap_or(0),
        levels,
        verdict,
        tolerances: *tol,
        notes: vec!["cumulative holds E_n / n".into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avgcase::{Value, WordMeasure};

    fn t() -> AvgTolerances {
        AvgTolerances::default()
    }

    #[test]
    fn sphere_expectations() {
        let one = MeasuredFunction::binary_words("1", WordMeasure::Uniform, |_| Value::int(1));
        let pow = MeasuredFunction::binary_words("2^n", WordMeasure::Uniform, Value::pow2);
        let sq = MeasuredFunction::binary_words("n^2", WordMeasure::Uniform, |n| Value::int(n * n));
        for n in [1, 5, 30] {
            assert!((expected_on_sphere(&one, n).unwrap() - 1.0).abs() < 1e-12);
            assert!((expected_on_sphere(&pow, n).unwrap() / 2f64.powi(n as i32) - 1.0).abs() < 1e-12);
            assert!((expected_on_sphere(&sq, n).unwrap() / (n * n) as f64 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn levin_example_matches_closed_form() {
        let f = MeasuredFunction::levin_example();
        let half = levin_check(&f, 0.5, 200, &t());
        assert_eq!(half.verdict, AvgVerdict::ConvergesAtHorizon);
        let mut closed = 0.0;
        for l in &half.levels {
            let n = l.n as f64;
            let expected = 2f64.powf(-n / 2.0 - 1.0) / n;
            assert!((l.term / expected - 1.0).abs() < 1e-9);
            closed += expected;
        }
        assert!((half.levels.last().unwrap().cumulative - closed).abs() < 1e-12);

        let one = levin_check(&f, 1.0, 200, &t());
        assert_eq!(one.verdict, AvgVerdict::DivergesAtHorizon);
        let harmonic: f64 = (1..=200).map(|n| 0.5 / n as f64).sum();
        assert!((one.levels.last().unwrap().cumulative - harmonic).abs() < 1e-9);
    }

    #[test]
    fn constant_function_converges() {
        let one = MeasuredFunction::binary_words("1", WordMeasure::Levin, |_| Value::int(1));
        assert_eq!(levin_check(&one, 1.0, 200, &t()).verdict, AvgVerdict::ConvergesAtHorizon);
    }

    #[test]
    fn impagliazzo_examples() {
        let n_list: Vec<u64> = (1..=40).collect();
        let one = MeasuredFunction::binary_words("1", WordMeasure::Uniform, |_| Value::int(1));
        let len = MeasuredFunction::binary_words("|w|", WordMeasure::Uniform, Value::int);
        let pow = MeasuredFunction::binary_words("2^|w|", WordMeasure::Uniform, Value::pow2);
        let bounded = AvgVerdict::PolynomiallyBoundedAtHorizon;
        let r1 = impagliazzo_check(&one, 1.0, &n_list, &t()).unwrap();
        assert_eq!(r1.verdict, bounded);
        assert!(r1.levels.iter().all(|l| (l.term - 1.0).abs() < 1e-12));
        let r2 = impagliazzo_check(&len, 1.0, &n_list, &t()).unwrap();
        assert_eq!(r2.verdict, bounded);
        assert!(r2.levels.iter().all(|l| l.term <= l.n as f64 + 1e-9));
        assert_eq!(impagliazzo_check(&pow, 0.5, &n_list, &t()).unwrap().verdict, AvgVerdict::UnboundedAtHorizon);
    }

    #[test]
    fn criteria_agree_on_the_example() {
        let f = MeasuredFunction::levin_example();
        let n_list: Vec<u64> = (1..=200).collect();
        assert_eq!(levin_check(&f, 0.5, 200, &t()).verdict, AvgVerdict::ConvergesAtHorizon);
        assert_eq!(
            impagliazzo_check(&f, 0.5, &n_list, &t()).unwrap().verdict,
            AvgVerdict::PolynomiallyBoundedAtHorizon
        );
    }

    #[test]
    fn spiked_function_fails_levin() {
        let g = MeasuredFunction::spiked_example();
        let r = levin_check(&g, 0.5, 200, &t());
        assert_eq!(r.verdict, AvgVerdict::DivergesAtHorizon);
        assert!(r.levels.last().unwrap().ln_cumulative > 1e50);
    }

    #[test]
    fn empty_sphere_errors() {
        let f = MeasuredFunction::new("nothing", 0, |_| Vec::new());
        assert!(matches!(expected_on_sphere(&f, 3), Err(AvgError::EmptySphere { n: 3 })));
    }
}
