use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::domain::{uniform_below, Geometry, Predicate, SizedDomain};
use super::{DensityError, RngState};
use crate::numeric::{self, decimal};

/// Default confidence for Monte Carlo intervals.
pub const DEFAULT_CONFIDENCE: f64 = 0.99;

/// Trials are drawn in fixed-size chunks, each from its own substream, so
/// the merged count does not depend on how chunks are scheduled.
pub const CHUNK_TRIALS: u64 = 2048;

/// How a frequency is obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    /// Full enumeration (or closed-form counts) of the sphere or ball.
    Exact,
    /// Uniform sampling with a normal-approximation interval.
    MonteCarlo { trials: u64, confidence: f64 },
}

impl Mode {
    pub fn monte_carlo(trials: u64) -> Self {
        Mode::MonteCarlo { trials, confidence: DEFAULT_CONFIDENCE }
    }

    pub fn kind(&self) -> ModeKind {
        match self {
            Mode::Exact => ModeKind::Exact,
            Mode::MonteCarlo { .. } => ModeKind::MonteCarlo,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeKind {
    Exact,
    MonteCarlo,
}

impl std::fmt::Display for ModeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModeKind::Exact => "exact",
            ModeKind::MonteCarlo => "monte-carlo",
        })
    }
}

/// A frequency value: an exact rational from enumeration, or a sample mean.
#[derive(Clone, Debug, PartialEq)]
pub enum Estimate {
    Exact(BigRational),
    Real(f64),
}

impl Estimate {
    pub fn value(&self) -> f64 {
        match self {
            Estimate::Exact(r) => numeric::ratio_to_f64(r),
            Estimate::Real(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Estimate::Exact(r) => Some(r),
            Estimate::Real(_) => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: String,
    den: String,
    decimal: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EstimateRepr {
    Exact(RationalRepr),
    Real(f64),
}

impl Serialize for Estimate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Estimate::Exact(r) => EstimateRepr::Exact(RationalRepr {
                num: r.numer().to_string(),
                den: r.denom().to_string(),
                decimal: numeric::ratio_to_f64(r),
            }),
            Estimate::Real(x) => EstimateRepr::Real(*x),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Estimate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match EstimateRepr::deserialize(d)? {
            EstimateRepr::Real(x) => Ok(Estimate::Real(x)),
            EstimateRepr::Exact(r) => {
                let num = r.num.parse().map_err(serde::de::Error::custom)?;
                let den = r.den.parse().map_err(serde::de::Error::custom)?;
                Ok(Estimate::Exact(BigRational::new(num, den)))
            }
        }
    }
}

/// One value of the frequency function `δ_R(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPoint {
    pub n: u64,
    pub mode: ModeKind,
    #[serde(with = "decimal")]
    pub hits: BigUint,
    #[serde(with = "decimal")]
    pub trials: BigUint,
    pub estimate: Estimate,
    pub ci_half_width: f64,
}

impl FrequencyPoint {
    pub fn exact(n: u64, hits: BigUint, trials: BigUint) -> Self {
        assert!(hits <= trials, "hits exceed trials");
        assert!(!trials.is_zero(), "empty stratum");
        let estimate = Estimate::Exact(numeric::ratio(&hits, &trials));
        Self { n, mode: ModeKind::Exact, hits, trials, estimate, ci_half_width: 0.0 }
    }

    pub fn sampled(n: u64, hits: u64, trials: u64, confidence: f64) -> Self {
        assert!(hits <= trials && trials > 0);
        let p = hits as f64 / trials as f64;
        Self {
            n,
            mode: ModeKind::MonteCarlo,
            hits: BigUint::from(hits),
            trials: BigUint::from(trials),
            estimate: Estimate::Real(p),
            ci_half_width: ci_half_width(hits, trials, confidence),
        }
    }

    pub fn value(&self) -> f64 {
        self.estimate.value()
    }

    /// Standard error of a sampled point (0 for exact points).
    pub fn std_error(&self) -> f64 {
        match self.mode {
            ModeKind::Exact => 0.0,
            ModeKind::MonteCarlo => {
                let n = self.trials.to_f64().unwrap_or(f64::INFINITY);
                let p = self.value();
                (p * (1.0 - p) / n).sqrt()
            }
        }
    }
}

/// Half-width of the confidence interval for `hits / trials`: normal
/// approximation, replaced by the Wilson half-width at the boundary.
pub fn ci_half_width(hits: u64, trials: u64, confidence: f64) -> f64 {
    let z = numeric::normal_quantile(confidence);
    let n = trials as f64;
    if hits == 0 || hits == trials {
        let z2 = z * z;
        return z2 / (2.0 * (n + z2));
    }
    let p = hits as f64 / n;
    z * (p * (1.0 - p) / n).sqrt()
}

/// Values of the frequency function at increasing radii.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencySeries {
    pub geometry: Geometry,
    pub predicate_id: String,
    pub points: Vec<FrequencyPoint>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    n: u64,
    geometry: Geometry,
    mode: ModeKind,
    hits: &'a str,
    trials: &'a str,
    estimate: f64,
    ci_half_width: f64,
}

impl FrequencySeries {
    pub fn new(geometry: Geometry, predicate_id: impl Into<String>, points: Vec<FrequencyPoint>) -> Result<Self, DensityError> {
        if points.windows(2).any(|w| w[0].n >= w[1].n) {
            return Err(DensityError::NotIncreasing);
        }
        Ok(Self { geometry, predicate_id: predicate_id.into(), points })
    }

    pub fn radii(&self) -> Vec<u64> {
        self.points.iter().map(|p| p.n).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(FrequencyPoint::value).collect()
    }

    pub fn horizon(&self) -> Option<u64> {
        self.points.last().map(|p| p.n)
    }

    /// CSV with columns `n, geometry, mode, hits, trials, estimate, ci_half_width`.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for p in &self.points {
            let hits = p.hits.to_string();
            let trials = p.trials.to_string();
            writer
                .serialize(CsvRow {
                    n: p.n,
                    geometry: self.geometry,
                    mode: p.mode,
                    hits: &hits,
                    trials: &trials,
                    estimate: p.value(),
                    ci_half_width: p.ci_half_width,
                })
                .expect("in-memory csv write");
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf8 csv")
    }
}

/// Exact `(|R ∩ I_m|, |I_m|)` for one sphere.
fn exact_sphere<D, P>(domain: &D, predicate: &P, m: u64) -> Result<(BigUint, BigUint), DensityError>
where
    D: SizedDomain,
    P: Predicate<D::Element> + ?Sized,
{
    let declared = domain.sphere_count(m);
    if let (Some(hits), Some(total)) = (predicate.sphere_hits(m), declared.clone()) {
        return Ok((hits, total));
    }
    if declared.as_ref().is_some_and(Zero::is_zero) {
        return Ok((BigUint::zero(), BigUint::zero()));
    }
    let (mut hits, mut total) = (0u64, 0u64);
    for element in domain.enumerate_sphere(m)? {
        total += 1;
        if predicate.test(&element) {
            hits += 1;
        }
    }
    let total = BigUint::from(total);
    if let Some(declared) = declared {
        if declared != total {
            return Err(DensityError::InconsistentCount {
                n: m,
                declared: declared.to_string(),
                enumerated: total.to_string(),
            });
        }
    }
    Ok((BigUint::from(hits), total))
}

fn radii<D: SizedDomain>(domain: &D, n: u64, geometry: Geometry) -> std::ops::RangeInclusive<u64> {
    match geometry {
        Geometry::Sphere => n..=n,
        Geometry::Ball => domain.min_radius()..=n,
    }
}

fn empty(n: u64, geometry: Geometry) -> DensityError {
    match geometry {
        Geometry::Sphere => DensityError::EmptySphere { n },
        Geometry::Ball => DensityError::EmptyBall { n },
    }
}

/// The frequency `|R ∩ S| / |S|` where `S` is the sphere or ball of radius `n`.
pub fn frequency<D, P>(
    domain: &D,
    predicate: &P,
    n: u64,
    geometry: Geometry,
    mode: Mode,
    rng: RngState,
) -> Result<FrequencyPoint, DensityError>
where
    D: SizedDomain,
    P: Predicate<D::Element> + ?Sized,
{
    match mode {
        Mode::Exact => {
            let mut hits = BigUint::zero();
            let mut total = BigUint::zero();
            for m in radii(domain, n, geometry) {
                let (h, t) = exact_sphere(domain, predicate, m)?;
                hits += h;
                total += t;
            }
            if total.is_zero() {
                return Err(empty(n, geometry));
            }
            Ok(FrequencyPoint::exact(n, hits, total))
        }
        Mode::MonteCarlo { trials, confidence } => {
            if trials == 0 {
                return Err(DensityError::InvalidTrials);
            }
            let sampler = StratumSampler::new(domain, n, geometry)?;
            let chunks = trials.div_ceil(CHUNK_TRIALS);
            let hits = (0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let mut rng = rng.child(chunk).rng();
                    let len = CHUNK_TRIALS.min(trials - chunk * CHUNK_TRIALS);
                    let mut hits = 0u64;
                    for _ in 0..len {
                        let element = sampler.sample(&mut rng)?;
                        if predicate.test(&element) {
                            hits += 1;
                        }
                    }
                    Ok(hits)
                })
                .collect::<Result<Vec<u64>, DensityError>>()?
                .into_iter()
                .sum();
            Ok(FrequencyPoint::sampled(n, hits, trials, confidence))
        }
    }
}

/// Uniform sampler over a sphere or ball.
pub(crate) struct StratumSampler<'a, D: SizedDomain> {
    domain: &'a D,
    n: u64,
    /// Cumulative sphere counts `(radius, |B_radius|)`; empty for spheres.
    cumulative: Vec<(u64, BigUint)>,
}

impl<'a, D: SizedDomain> StratumSampler<'a, D> {
    pub(crate) fn new(domain: &'a D, n: u64, geometry: Geometry) -> Result<Self, DensityError> {
        match geometry {
            Geometry::Sphere => {
                if domain.sphere_count(n).is_some_and(|c| c.is_zero()) {
                    return Err(DensityError::EmptySphere { n });
                }
                Ok(Self { domain, n, cumulative: Vec::new() })
            }
            Geometry::Ball => {
                let mut running = BigUint::zero();
                let mut cumulative = Vec::new();
                for m in radii(domain, n, geometry) {
                    let count = domain.sphere_count(m).ok_or(DensityError::SamplerUnavailable { n })?;
                    if count.is_zero() {
                        continue;
                    }
                    running += count;
                    cumulative.push((m, running.clone()));
                }
                if cumulative.is_empty() {
                    return Err(DensityError::EmptyBall { n });
                }
                Ok(Self { domain, n, cumulative })
            }
        }
    }

    pub(crate) fn sample(&self, rng: &mut dyn rand::RngCore) -> Result<D::Element, DensityError> {
        if self.cumulative.is_empty() {
            return self.domain.sample_sphere(self.n, rng);
        }
        let total = &self.cumulative.last().expect("nonempty").1;
        let r = uniform_below(total, rng);
        let idx = self.cumulative.partition_point(|(_, c)| c <= &r);
        self.domain.sample_sphere(self.cumulative[idx].0, rng)
    }
}

/// One frequency point per radius, each from the substream keyed by `n`.
pub fn frequency_series<D, P>(
    domain: &D,
    predicate: &P,
    n_list: &[u64],
    geometry: Geometry,
    mode: Mode,
    rng: RngState,
) -> Result<FrequencySeries, DensityError>
where
    D: SizedDomain,
    P: Predicate<D::Element> + ?Sized,
{
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DensityError::NotIncreasing);
    }
    let points = n_list
        .iter()
        .map(|&n| {
            frequency(domain, predicate, n, geometry, mode, rng.child(n))
                .map_err(|e| DensityError::AtRadius { n, source: Box::new(e) })
        })
        .collect::<Result<Vec<_>, _>>()?;
    FrequencySeries::new(geometry, predicate.label(), points)
}

/// Sphere and ball frequencies of the same predicate at radius `n`.
pub fn spherical_vs_volume<D, P>(
    domain: &D,
    predicate: &P,
    n: u64,
    mode: Mode,
    rng: RngState,
) -> Result<(FrequencyPoint, FrequencyPoint), DensityError>
where
    D: SizedDomain,
    P: Predicate<D::Element> + ?Sized,
{
    let sphere = frequency(domain, predicate, n, Geometry::Sphere, mode, rng.child(0))?;
    let ball = frequency(domain, predicate, n, Geometry::Ball, mode, rng.child(1))?;
    Ok((sphere, ball))
}
