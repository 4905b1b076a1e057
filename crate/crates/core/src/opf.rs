//! Optimal point forecasts (Bayes acts) under each scoring function.
//!
//! The TADDA forecasts are closed-form case formulas in the tail masses
//! `pi_minus = Pr(Y < -eps)` and `pi_plus = Pr(Y > eps)`. Each result carries
//! the branch that fired. [`brute_force_opf`] minimizes the expected score
//! over a grid instead and is used as an independent check.

use std::fmt;

use crate::distributions::{tail_masses, PredictiveDistribution};
use crate::error::{Error, Result};
use crate::par;
use crate::scores::{ScoreKind, ScoreSpec};

/// Slack for comparing tail masses against case thresholds. At every
/// threshold both adjacent branches attain the same expected score.
const TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpfCase {
    Median,
    Mean,
    /// Quantile below `-eps`; the forecaster accepts the risk of a penalty.
    HighConfidenceNegative,
    /// `-eps` because `Y < -eps` is likely but not likely enough.
    LowConfidenceNegative,
    /// Sign unclear: the median, which lies in `[-eps, eps]`.
    MedianInTolerance,
    LowConfidencePositive,
    HighConfidencePositive,
    MeanInTolerance,
    /// Mean pulled towards `eps` by the penalty mass.
    ShrunkMeanPositive,
    /// Mean pulled towards `-eps` by the penalty mass.
    ShrunkMeanNegative,
    /// Median in the region, forecast on its lower boundary.
    ToleranceLowerBound,
    /// Median in the region, forecast on its upper boundary.
    ToleranceUpperBound,
    /// Median in the region, forecast at an interior quantile.
    CentralQuantile,
}

impl OpfCase {
    pub fn label(self) -> &'static str {
        match self {
            Self::Median => "median",
            Self::Mean => "mean",
            Self::HighConfidenceNegative => "high-confidence-negative",
            Self::LowConfidenceNegative => "low-confidence-negative",
            Self::MedianInTolerance => "median-in-tolerance",
            Self::LowConfidencePositive => "low-confidence-positive",
            Self::HighConfidencePositive => "high-confidence-positive",
            Self::MeanInTolerance => "mean-in-tolerance",
            Self::ShrunkMeanPositive => "shrunk-mean-positive",
            Self::ShrunkMeanNegative => "shrunk-mean-negative",
            Self::ToleranceLowerBound => "tolerance-lower-bound",
            Self::ToleranceUpperBound => "tolerance-upper-bound",
            Self::CentralQuantile => "central-quantile",
        }
    }
}

impl fmt::Display for OpfCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpfResult {
    pub value: f64,
    pub case: OpfCase,
}

impl OpfResult {
    fn new(value: f64, case: OpfCase) -> Self {
        Self { value, case }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {eps}")));
    }
    Ok(())
}

/// Absolute error elicits the median.
pub fn opf_ae<D: PredictiveDistribution + ?Sized>(dist: &D) -> f64 {
    dist.median()
}

/// Squared error elicits the mean.
pub fn opf_se<D: PredictiveDistribution + ?Sized>(dist: &D) -> f64 {
    dist.mean()
}

/// Five-case optimal forecast under TADDA1-L1.
///
/// ```text
/// F^-1(0.5 (1 + pi+))   if pi- >= 0.5 (1 + pi+)
/// -eps                  if 0.5 < pi- < 0.5 (1 + pi+)
/// median                if pi- <= 0.5 and pi+ <= 0.5
/// eps                   if 0.5 < pi+ <= 0.5 (1 + pi-)
/// F^-1(0.5 (1 - pi-))   if pi+ > 0.5 (1 + pi-)
/// ```
///
/// In the median branch a median exists inside `[-eps, eps]`; for discrete
/// distributions with `pi- = 0.5` the lower median can sit below `-eps`, so it
/// is clamped into the region, which stays within the set of medians.
pub fn opf_tadda1_l1<D: PredictiveDistribution + ?Sized>(dist: &D, eps: f64) -> Result<OpfResult> {
    check_eps(eps)?;
    let t = tail_masses(dist, eps);
    let (lo, hi) = (t.below, t.above);
    if lo >= 0.5 * (1.0 + hi) - TOL {
        let q = dist.quantile(0.5 * (1.0 + hi))?;
        return Ok(OpfResult::new(q, OpfCase::HighConfidenceNegative));
    }
    if lo > 0.5 + TOL {
        return Ok(OpfResult::new(-eps, OpfCase::LowConfidenceNegative));
    }
    if hi > 0.5 * (1.0 + lo) + TOL {
        let q = dist.quantile(0.5 * (1.0 - lo))?;
        return Ok(OpfResult::new(q, OpfCase::HighConfidencePositive));
    }
    if hi > 0.5 + TOL {
        return Ok(OpfResult::new(eps, OpfCase::LowConfidencePositive));
    }
    Ok(OpfResult::new(dist.median().clamp(-eps, eps), OpfCase::MedianInTolerance))
}

/// Three-case optimal forecast under TADDA1-L2: the mean when it lies in the
/// tolerance region, otherwise the mean of the mixture of `Y` with a point
/// mass at the near boundary.
pub fn opf_tadda1_l2<D: PredictiveDistribution + ?Sized>(dist: &D, eps: f64) -> Result<OpfResult> {
    check_eps(eps)?;
    let mu = dist.mean();
    let t = tail_masses(dist, eps);
    Ok(if mu > eps {
        let v = mu / (1.0 + t.below) + eps * t.below / (1.0 + t.below);
        OpfResult::new(v, OpfCase::ShrunkMeanPositive)
    } else if mu < -eps {
        let v = mu / (1.0 + t.above) - eps * t.above / (1.0 + t.above);
        OpfResult::new(v, OpfCase::ShrunkMeanNegative)
    } else {
        OpfResult::new(mu, OpfCase::MeanInTolerance)
    })
}

/// Six-case optimal forecast under TADDA2-L1.
///
/// ```text
/// F^-1(0.5 (2 - pi-))            if pi- >= 2/3
/// F^-1(0.5 pi+)                  if pi+ > 2/3
/// -eps                           if m < -eps
/// eps                            if m > eps
/// for m in [-eps, eps]:
///   -eps                         if pi- >= (1 + pi+ - 2 Pr(Y = -eps)) / 3
///   eps                          if pi+ >= (1 + pi-) / 3
///   F^-1(0.5 (1 - pi- + pi+))    otherwise
/// ```
pub fn opf_tadda2_l1<D: PredictiveDistribution + ?Sized>(dist: &D, eps: f64) -> Result<OpfResult> {
    check_eps(eps)?;
    let t = tail_masses(dist, eps);
    let (lo, hi) = (t.below, t.above);
    const TWO_THIRDS: f64 = 2.0 / 3.0;
    if lo >= TWO_THIRDS - TOL {
        let q = dist.quantile(0.5 * (2.0 - lo))?;
        return Ok(OpfResult::new(q, OpfCase::HighConfidenceNegative));
    }
    if hi > TWO_THIRDS + TOL {
        let q = dist.quantile(0.5 * hi)?;
        return Ok(OpfResult::new(q, OpfCase::HighConfidencePositive));
    }
    let m = dist.median();
    if m < -eps {
        return Ok(OpfResult::new(-eps, OpfCase::LowConfidenceNegative));
    }
    if m > eps {
        return Ok(OpfResult::new(eps, OpfCase::LowConfidencePositive));
    }
    if lo >= (1.0 + hi - 2.0 * t.at_minus) / 3.0 - TOL {
        return Ok(OpfResult::new(-eps, OpfCase::ToleranceLowerBound));
    }
    if hi >= (1.0 + lo) / 3.0 - TOL {
        return Ok(OpfResult::new(eps, OpfCase::ToleranceUpperBound));
    }
    let q = dist.quantile(0.5 * (1.0 - lo + hi))?;
    Ok(OpfResult::new(q, OpfCase::CentralQuantile))
}

/// Closed-form optimal forecast for any supported score.
pub fn opf<D: PredictiveDistribution + ?Sized>(dist: &D, spec: &ScoreSpec) -> Result<OpfResult> {
    let eps = spec.epsilon().unwrap_or(0.0);
    match spec.kind() {
        ScoreKind::Ae => Ok(OpfResult::new(opf_ae(dist), OpfCase::Median)),
        ScoreKind::Se => Ok(OpfResult::new(opf_se(dist), OpfCase::Mean)),
        ScoreKind::Tadda1L1 => opf_tadda1_l1(dist, eps),
        ScoreKind::Tadda1L2 => opf_tadda1_l2(dist, eps),
        ScoreKind::Tadda2L1 => opf_tadda2_l1(dist, eps),
    }
}

/// Mean score of `y_hat` over a fixed set of outcomes.
pub fn expected_score_on(outcomes: &[f64], spec: &ScoreSpec, y_hat: f64) -> Result<f64> {
    if !y_hat.is_finite() {
        return Err(Error::NonFinite("y_hat"));
    }
    if outcomes.is_empty() {
        return Err(Error::InvalidParameter("no outcomes to average over".into()));
    }
    Ok(par::mean_by(outcomes, |&y| spec.eval_unchecked(y_hat, y)))
}

/// `E_F[s(y_hat, Y)]`: an exact finite sum for empirical distributions, a
/// Monte Carlo average over `mc_samples` seeded draws otherwise.
pub fn expected_score<D: PredictiveDistribution + ?Sized>(
    dist: &D,
    spec: &ScoreSpec,
    y_hat: f64,
    mc_samples: usize,
    seed: u64,
) -> Result<f64> {
    match dist.atoms() {
        Some(atoms) => expected_score_on(atoms, spec, y_hat),
        None => {
            if mc_samples == 0 {
                return Err(Error::InvalidParameter("mc_samples must be at least 1".into()));
            }
            expected_score_on(&dist.sample(mc_samples, seed), spec, y_hat)
        }
    }
}

/// Equally spaced search grid `lo, lo + step, ...` up to `hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        let g = Self { lo, hi, step };
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || step <= 0.0 || lo >= hi {
            return Err(Error::EmptyGrid { lo, hi, step });
        }
        Ok(g)
    }

    /// `[F^-1(0.001) - eps, F^-1(0.999) + eps]` with step `1e-3`.
    pub fn around<D: PredictiveDistribution + ?Sized>(dist: &D, eps: f64) -> Result<Self> {
        let lo = dist.quantile(0.001)? - eps;
        let hi = dist.quantile(0.999)? + eps;
        if lo >= hi {
            return Self::new(lo - 1e-3, hi + 1e-3, 1e-3);
        }
        Self::new(lo, hi, 1e-3)
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

/// Grid point with the lowest expected score (ties go to the smaller point).
///
/// Continuous distributions are scored on one shared Monte Carlo sample so
/// that all grid points see the same noise.
pub fn brute_force_opf<D: PredictiveDistribution + ?Sized>(
    dist: &D,
    spec: &ScoreSpec,
    grid: &Grid,
    mc_samples: usize,
    seed: u64,
) -> Result<f64> {
    let sample;
    let outcomes: &[f64] = match dist.atoms() {
        Some(a) => a,
        None => {
            if mc_samples == 0 {
                return Err(Error::InvalidParameter("mc_samples must be at least 1".into()));
            }
            sample = dist.sample(mc_samples, seed);
            &sample
        }
    };
    let points = grid.points();
    let scores = par::map(&points, |&x| outcomes.iter().map(|&y| spec.eval_unchecked(x, y)).sum::<f64>());
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s < scores[best] {
            best = i;
        }
    }
    Ok(points[best])
}
