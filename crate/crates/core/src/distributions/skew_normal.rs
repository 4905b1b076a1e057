use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use libm::erfc;

use super::PredictiveDistribution;
use crate::error::{Error, Result};
use crate::par;

/// Location `xi`, scale `omega > 0` and slant `alpha` of a skew normal law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewNormalParams {
    pub xi: f64,
    pub omega: f64,
    pub alpha: f64,
}

impl SkewNormalParams {
    pub fn new(xi: f64, omega: f64, alpha: f64) -> Result<Self> {
        if !(xi.is_finite() && omega.is_finite() && alpha.is_finite()) {
            return Err(Error::NonFinite("skew normal parameters"));
        }
        if omega <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "skew normal scale must be positive, got {omega}"
            )));
        }
        Ok(Self { xi, omega, alpha })
    }
}

/// Skew normal distribution with density `2/omega * phi(z) * Phi(alpha z)`,
/// `z = (x - xi) / omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewNormal {
    params: SkewNormalParams,
    delta: f64,
}

const OWEN_TOL: f64 = 1e-14;
const MAX_DEPTH: u32 = 60;

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

/// Owen's T function `T(h, a) = 1/(2 pi) * int_0^a exp(-h^2 (1+x^2)/2) / (1+x^2) dx`.
fn owens_t(h: f64, a: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    if a < 0.0 {
        return -owens_t(h, -a);
    }
    let hh = 0.5 * h * h;
    let f = |x: f64| {
        let s = 1.0 + x * x;
        (-hh * s).exp() / s
    };
    adaptive_simpson(&f, 0.0, a, OWEN_TOL) / (2.0 * PI)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || (depth < MAX_DEPTH - 4 && diff.abs() <= 15.0 * tol) {
        return left + right + diff / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

impl SkewNormal {
    pub fn new(params: SkewNormalParams) -> Self {
        let delta = params.alpha / (1.0 + params.alpha * params.alpha).sqrt();
        Self { params, delta }
    }

    pub fn from_parts(xi: f64, omega: f64, alpha: f64) -> Result<Self> {
        SkewNormalParams::new(xi, omega, alpha).map(Self::new)
    }

    pub fn params(&self) -> SkewNormalParams {
        self.params
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFinite("x"));
        }
        let SkewNormalParams { xi, omega, alpha } = self.params;
        let z = (x - xi) / omega;
        Ok(2.0 / omega * std_normal_pdf(z) * std_normal_cdf(alpha * z))
    }

    /// CDF through the identity `F(x) = Phi(z) - 2 T(z, alpha)`.
    pub fn try_cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::NonFinite("x"));
        }
        if x == f64::INFINITY {
            return Ok(1.0);
        }
        if x == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        let z = (x - self.params.xi) / self.params.omega;
        let v = std_normal_cdf(z) - 2.0 * owens_t(z, self.params.alpha);
        Ok(v.clamp(0.0, 1.0))
    }

    pub fn variance(&self) -> f64 {
        let w = self.params.omega;
        w * w * (1.0 - 2.0 * self.delta * self.delta / PI)
    }

    fn bracket(&self, p: f64) -> (f64, f64) {
        let SkewNormalParams { xi, omega, .. } = self.params;
        let mut k = 8.0;
        loop {
            let lo = xi - k * omega;
            let hi = xi + k * omega;
            if (self.cdf(lo) <= p && self.cdf(hi) >= p) || k > 1e6 {
                return (lo, hi);
            }
            k *= 2.0;
        }
    }
}

impl PredictiveDistribution for SkewNormal {
    fn cdf(&self, x: f64) -> f64 {
        self.try_cdf(x).unwrap_or(f64::NAN)
    }

    /// Bisection on the CDF; `p` must lie in `(0, 1)`.
    fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        let (mut lo, mut hi) = self.bracket(p);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) >= p {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    fn mean(&self) -> f64 {
        self.params.xi + self.params.omega * self.delta * (2.0 / PI).sqrt()
    }

    fn median(&self) -> f64 {
        self.quantile(0.5).expect("0.5 is a valid level")
    }

    fn prob_at(&self, _t: f64) -> f64 {
        0.0
    }

    /// `xi + omega (delta |U0| + sqrt(1 - delta^2) U1)` with standard normal
    /// `U0`, `U1`. Draws are generated in fixed chunks, each on its own
    /// ChaCha stream, so the output does not depend on the thread count.
    fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let SkewNormalParams { xi, omega, .. } = self.params;
        let d = self.delta;
        let e = (1.0 - d * d).sqrt();
        let chunks = n.div_ceil(par::CHUNK);
        let parts = par::map_range(chunks, |c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = par::CHUNK.min(n - c * par::CHUNK);
            (0..len)
                .map(|_| {
                    let u0: f64 = StandardNormal.sample(&mut rng);
                    let u1: f64 = StandardNormal.sample(&mut rng);
                    xi + omega * (d * u0.abs() + e * u1)
                })
                .collect::<Vec<f64>>()
        });
        parts.concat()
    }
}
