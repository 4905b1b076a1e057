use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PredictiveDistribution;
use crate::error::{Error, Result};

/// Equal-weight discrete distribution on `w` atoms (duplicates allowed),
/// each carrying probability `1/w`. Atoms are kept sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteEmpirical {
    atoms: Vec<f64>,
}

/// Strict tail masses around the tolerance region `[-eps, eps]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailMasses {
    /// `Pr(Y < -eps)`
    pub below: f64,
    /// `Pr(Y = -eps)`
    pub at_minus: f64,
    /// `Pr(Y > eps)`
    pub above: f64,
}

// Slack on `n * p` before rounding up, so that levels such as
// 0.5 * (1 + 1/3) hit the intended order statistic.
const FUZZ: f64 = 1e-9;

impl DiscreteEmpirical {
    pub fn new(mut atoms: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidParameter("empirical distribution needs at least one atom".into()));
        }
        if atoms.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite("atom"));
        }
        atoms.sort_by(f64::total_cmp);
        Ok(Self { atoms })
    }

    /// Point mass at `x`.
    pub fn point_mass(x: f64) -> Result<Self> {
        Self::new(vec![x])
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn sorted_atoms(&self) -> &[f64] {
        &self.atoms
    }

    /// Type-1 quantile: the atom with 1-based index `ceil(p w)`; `p` in `(0, 1]`.
    pub fn quantile_type1(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        let n = self.atoms.len();
        let np = n as f64 * p;
        let j = (np + FUZZ).floor();
        let k = if np > j + FUZZ { j as usize + 1 } else { j as usize };
        Ok(self.atoms[k.clamp(1, n) - 1])
    }

    fn count_below(&self, t: f64) -> usize {
        self.atoms.partition_point(|&a| a < t)
    }

    fn count_at_or_below(&self, t: f64) -> usize {
        self.atoms.partition_point(|&a| a <= t)
    }

    /// Masses strictly below `-eps`, exactly at `-eps`, and strictly above `eps`.
    pub fn tail_probs(&self, eps: f64) -> TailMasses {
        let w = self.atoms.len() as f64;
        let below = self.count_below(-eps);
        let at = self.count_at_or_below(-eps) - below;
        let above = self.atoms.len() - self.count_at_or_below(eps);
        TailMasses {
            below: below as f64 / w,
            at_minus: at as f64 / w,
            above: above as f64 / w,
        }
    }
}

impl PredictiveDistribution for DiscreteEmpirical {
    fn cdf(&self, x: f64) -> f64 {
        self.count_at_or_below(x) as f64 / self.atoms.len() as f64
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        self.quantile_type1(p)
    }

    fn mean(&self) -> f64 {
        self.atoms.iter().sum::<f64>() / self.atoms.len() as f64
    }

    fn median(&self) -> f64 {
        self.quantile_type1(0.5).expect("0.5 is a valid level")
    }

    fn prob_at(&self, t: f64) -> f64 {
        (self.count_at_or_below(t) - self.count_below(t)) as f64 / self.atoms.len() as f64
    }

    fn prob_below(&self, t: f64) -> f64 {
        self.count_below(t) as f64 / self.atoms.len() as f64
    }

    fn prob_above(&self, t: f64) -> f64 {
        (self.atoms.len() - self.count_at_or_below(t)) as f64 / self.atoms.len() as f64
    }

    fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.atoms[rng.random_range(0..self.atoms.len())]).collect()
    }

    fn atoms(&self) -> Option<&[f64]> {
        Some(&self.atoms)
    }
}
