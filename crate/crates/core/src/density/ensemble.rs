use super::domain::{Geometry, Predicate, SizedDomain};
use super::DensityError;

/// Default tolerance on `|Σ μ_n − 1|` for a normalized ensemble.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// An ensemble `{μ_n}` of probability distributions on the spheres (or
/// balls) of an enumerable domain, obtained by conditioning an atomic
/// weight function.
pub struct Ensemble<'a, D: SizedDomain> {
    domain: &'a D,
    mu: Box<dyn Fn(&D::Element) -> f64 + Sync + 'a>,
    geometry: Geometry,
    normalized: bool,
}

/// Condition the atomic weights `mu` on each sphere or ball of `domain`.
pub fn conditional_ensemble<'a, D, F>(mu: F, domain: &'a D, geometry: Geometry) -> Ensemble<'a, D>
where
    D: SizedDomain,
    F: Fn(&D::Element) -> f64 + Sync + 'a,
{
    Ensemble { domain, mu: Box::new(mu), geometry, normalized: true }
}

/// The uniform ensemble: counting measure conditioned on each stratum.
pub fn uniform_ensemble<D: SizedDomain>(domain: &D, geometry: Geometry) -> Ensemble<'_, D> {
    conditional_ensemble(|_| 1.0, domain, geometry)
}

impl<'a, D: SizedDomain> Ensemble<'a, D> {
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Elements of the stratum of radius `n` with their `μ_n` weights.
    pub fn distribution(&self, n: u64) -> Result<Vec<(D::Element, f64)>, DensityError> {
        let lo = match self.geometry {
            Geometry::Sphere => n,
            Geometry::Ball => self.domain.min_radius(),
        };
        let mut atoms = Vec::new();
        for m in lo..=n {
            for element in self.domain.enumerate_sphere(m)? {
                let w = (self.mu)(&element);
                if !(w >= 0.0) || !w.is_finite() {
                    return Err(DensityError::NegativeWeight { n: m, weight: w });
                }
                atoms.push((element, w));
            }
        }
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        if !(total > 0.0) {
            return Err(DensityError::ZeroMass { n });
        }
        for (_, w) in atoms.iter_mut() {
            *w /= total;
        }
        debug_assert!((atoms.iter().map(|(_, w)| w).sum::<f64>() - 1.0).abs() < 1e-9);
        Ok(atoms)
    }

    /// `μ_n(R)`, the generalized frequency of `R` at radius `n`.
    pub fn measure<P: Predicate<D::Element> + ?Sized>(&self, n: u64, predicate: &P) -> Result<f64, DensityError> {
        Ok(self
            .distribution(n)?
            .iter()
            .filter(|(e, _)| predicate.test(e))
            .map(|(_, w)| w)
            .sum())
    }

    /// `E_{μ_n}[f]`.
    pub fn expectation<F: Fn(&D::Element) -> f64>(&self, n: u64, f: F) -> Result<f64, DensityError> {
        Ok(self.distribution(n)?.iter().map(|(e, w)| f(e) * w).sum())
    }
}
