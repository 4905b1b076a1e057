//! Synthetic country-month fatality panels.
//!
//! Counts come from a switching process: each country alternates between a
//! quiet regime with zero fatalities and an active regime where counts are
//! Poisson around an AR(1) log-intensity. This reproduces the sparsity and
//! right skew of real conflict data closely enough to exercise the
//! evaluation harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};

use crate::forecaster::FatalitySeries;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticPanel {
    pub countries: usize,
    pub first_month: i64,
    pub months: usize,
    /// Probability of staying in the current regime from one month to the next.
    pub persistence: f64,
    /// AR(1) coefficient of the active-regime log-intensity.
    pub ar: f64,
    pub innovation_sd: f64,
}

impl Default for SyntheticPanel {
    fn default() -> Self {
        Self {
            countries: 50,
            first_month: 361,
            months: 120,
            persistence: 0.97,
            ar: 0.95,
            innovation_sd: 0.2,
        }
    }
}

impl SyntheticPanel {
    pub fn generate(&self, seed: u64) -> Vec<FatalitySeries> {
        (0..self.countries)
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                let level = rng.random_range(0.0..4.0);
                let noise = Normal::new(0.0, self.innovation_sd).expect("finite sd");
                let mut active = rng.random_bool(0.5);
                let mut z = 0.0;
                let counts = (0..self.months)
                    .map(|_| {
                        if !rng.random_bool(self.persistence) {
                            active = !active;
                        }
                        z = self.ar * z + noise.sample(&mut rng);
                        if active {
                            let lambda: f64 = (level + z).exp().max(1e-9);
                            Poisson::new(lambda).expect("positive rate").sample(&mut rng) as u64
                        } else {
                            0
                        }
                    })
                    .collect();
                FatalitySeries::new(format!("{c:03}"), self.first_month, counts).expect("non-empty")
            })
            .collect()
    }
}
