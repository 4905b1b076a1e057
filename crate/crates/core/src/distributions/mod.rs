//! Predictive distributions over log-changes.
//!
//! Every optimal-point-forecast formula in [`crate::opf`] is written against
//! the [`PredictiveDistribution`] capability: a CDF, its generalized inverse,
//! the mean, and the strict tail masses around a tolerance region.

mod empirical;
mod skew_normal;

pub use empirical::{DiscreteEmpirical, TailMasses};
pub use skew_normal::{SkewNormal, SkewNormalParams};

use crate::error::Result;

/// A univariate predictive distribution `F` for the outcome `Y`.
pub trait PredictiveDistribution: Sync {
    /// `F(x) = Pr(Y <= x)`.
    fn cdf(&self, x: f64) -> f64;

    /// Generalized inverse `inf{x : F(x) >= p}`.
    fn quantile(&self, p: f64) -> Result<f64>;

    fn mean(&self) -> f64;

    /// `quantile(0.5)`; for discrete families this is the lower median.
    fn median(&self) -> f64;

    /// `Pr(Y = t)`. Zero for continuous families.
    fn prob_at(&self, t: f64) -> f64;

    /// `Pr(Y < t)`.
    fn prob_below(&self, t: f64) -> f64 {
        self.cdf(t) - self.prob_at(t)
    }

    /// `Pr(Y > t)`.
    fn prob_above(&self, t: f64) -> f64 {
        1.0 - self.cdf(t)
    }

    /// `n` i.i.d. draws, fully determined by `seed`.
    fn sample(&self, n: usize, seed: u64) -> Vec<f64>;

    /// Equal-weight support points when the distribution is a finite
    /// empirical one, which lets expectations be computed exactly.
    fn atoms(&self) -> Option<&[f64]> {
        None
    }
}

/// Strict tail masses `(Pr(Y < -eps), Pr(Y = -eps), Pr(Y > eps))` of any
/// predictive distribution.
pub fn tail_masses<D: PredictiveDistribution + ?Sized>(dist: &D, eps: f64) -> TailMasses {
    TailMasses {
        below: dist.prob_below(-eps),
        at_minus: dist.prob_at(-eps),
        above: dist.prob_above(eps),
    }
}
