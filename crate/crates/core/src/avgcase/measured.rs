use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::value::{Monomial, Value};
use crate::density::SizedDomain;

/// `count` elements of one sphere sharing a value and a per-element weight.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub value: Value,
    pub count: BigUint,
    pub weight: BigRational,
}

impl Atom {
    pub fn new(value: Value, count: impl Into<BigUint>, weight: BigRational) -> Self {
        Self { value, count: count.into(), weight }
    }

    /// Total weight `count * weight`.
    pub fn mass(&self) -> BigRational {
        &self.weight * BigRational::from_integer(BigInt::from(self.count.clone()))
    }
}

type Levels = dyn Fn(u64) -> Vec<Atom> + Send + Sync;

/// A nonnegative function on a stratified domain together with a measure,
/// described sphere by sphere as a list of [`Atom`]s. Sphere measures
/// `μ_n` are the weights normalized on each sphere.
#[derive(Clone)]
pub struct MeasuredFunction {
    label: String,
    min_size: u64,
    levels: Arc<Levels>,
}

impl std::fmt::Debug for MeasuredFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MeasuredFunction").field("label", &self.label).field("min_size", &self.min_size).finish()
    }
}

fn pow2_inverse(exp: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(BigUint::one() << exp))
}

/// Weights on binary words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordMeasure {
    /// Counting measure: every word weighs 1.
    Uniform,
    /// `μ(w) = 2^{-2|w|-1}`, a probability measure on `{0,1}^*`.
    Levin,
}

impl WordMeasure {
    pub fn weight(self, n: u64) -> BigRational {
        match self {
            WordMeasure::Uniform => BigRational::one(),
            WordMeasure::Levin => pow2_inverse(2 * n + 1),
        }
    }
}

impl MeasuredFunction {
    pub fn new<F>(label: impl Into<String>, min_size: u64, levels: F) -> Self
    where
        F: Fn(u64) -> Vec<Atom> + Send + Sync + 'static,
    {
        Self { label: label.into(), min_size, levels: Arc::new(levels) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn min_size(&self) -> u64 {
        self.min_size
    }

    /// Atoms of sphere `n`; empty below the minimum size.
    pub fn sphere(&self, n: u64) -> Vec<Atom> {
        if n < self.min_size {
            return Vec::new();
        }
        (self.levels)(n)
    }

    pub fn sphere_mass(&self, n: u64) -> BigRational {
        self.sphere(n).iter().map(Atom::mass).fold(BigRational::zero(), |a, b| a + b)
    }

    /// A function of the length only, on binary words.
    pub fn binary_words<F>(label: impl Into<String>, measure: WordMeasure, value: F) -> Self
    where
        F: Fn(u64) -> Value + Send + Sync + 'static,
    {
        Self::new(label, 0, move |n| vec![Atom::new(value(n), BigUint::one() << n, measure.weight(n))])
    }

    /// On binary words: `spike(n)` at `0^n`, `base` on every other word.
    pub fn spiked<F>(label: impl Into<String>, measure: WordMeasure, spike: F, base: Value) -> Self
    where
        F: Fn(u64) -> Value + Send + Sync + 'static,
    {
        Self::new(label, 0, move |n| {
            let w = measure.weight(n);
            let mut atoms = vec![Atom::new(spike(n), 1u32, w.clone())];
            let rest = (BigUint::one() << n) - 1u32;
            if !rest.is_zero() {
                atoms.push(Atom::new(base.clone(), rest, w));
            }
            atoms
        })
    }

    /// `f(w) = 2^|w|` with `μ(w) = 2^{-2|w|-1}`.
    pub fn levin_example() -> Self {
        Self::binary_words("2^|w| under 2^(-2|w|-1)", WordMeasure::Levin, Value::pow2)
    }

    /// Huge (`2^(2^n)`) on the all-zeros word of each length, 1 elsewhere.
    pub fn spiked_example() -> Self {
        Self::spiked(
            "2^(2^|w|) on 0^n, 1 elsewhere",
            WordMeasure::Levin,
            |n| Value::pow2(BigUint::one() << n),
            Value::int(1),
        )
    }

    /// Per sphere `n`: value `c·n·q(n)·t` on a part of `μ_n`-mass
    /// `1/(t·q(n))`, zero on the rest. Meets the Markov premise with
    /// `k = 1` and equality, and its violation set has mass `1/(t·q(n))`.
    pub fn markov_extremal(c: BigRational, q: Monomial, t: u64) -> Self {
        assert!(t >= 1);
        let label = format!("markov extremal c={c} q={q} t={t}");
        Self::new(label, 1, move |n| {
            let tq = q.eval_rational(n) * BigRational::from_integer(BigInt::from(t));
            let high = BigRational::from_integer(BigInt::from(n)) * &c * &tq;
            let p = tq.recip();
            vec![
                Atom::new(Value::Rational(high), 1u32, p.clone()),
                Atom::new(Value::int(0), 1u32, BigRational::one() - p),
            ]
        })
    }

    /// Build spheres by enumerating a domain, one atom per element.
    pub fn enumerated<D, W, F>(label: impl Into<String>, domain: D, weight: W, value: F) -> Self
    where
        D: SizedDomain + Send + 'static,
        W: Fn(&D::Element) -> BigRational + Send + Sync + 'static,
        F: Fn(&D::Element) -> Value + Send + Sync + 'static,
    {
        let min = domain.min_radius();
        Self::new(label, min, move |n| match domain.enumerate_sphere(n) {
            Ok(stream) => stream.map(|x| Atom::new(value(&x), 1u32, weight(&x))).collect(),
            Err(_) => Vec::new(),
        })
    }
}
