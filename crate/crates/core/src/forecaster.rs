//! Log-change targets and the window-based empirical forecaster.
//!
//! At issue month `t - s` the forecaster looks at the last `w` observed
//! counts and takes the log-changes they imply relative to the latest
//! count, `log(x[t-s] + 1) - log(x[t-s-i] + 1)` for `i = 0..w`, as an
//! equal-weight predictive distribution for `Y[t, s]`. The distribution
//! depends on the issue month only, so it is shared by all lead times.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::{DiscreteEmpirical, PredictiveDistribution};
use crate::error::{Error, Result};
use crate::opf;

/// Monthly fatality counts of one country over a contiguous month range.
#[derive(Debug, Clone, PartialEq)]
pub struct FatalitySeries {
    country_id: String,
    first_month: i64,
    counts: Vec<u64>,
    log_counts: Vec<f64>,
}

fn log1p_count(x: u64) -> f64 {
    ((x + 1) as f64).ln()
}

impl FatalitySeries {
    /// Series starting at `first_month` with one count per month.
    pub fn new(country_id: impl Into<String>, first_month: i64, counts: Vec<u64>) -> Result<Self> {
        let country_id = country_id.into();
        if counts.is_empty() {
            return Err(Error::InvalidPanel(format!("country {country_id} has no observations")));
        }
        let log_counts = counts.iter().map(|&x| log1p_count(x)).collect();
        Ok(Self { country_id, first_month, counts, log_counts })
    }

    /// Builds a series from `(month, count)` pairs, which must be strictly
    /// increasing and contiguous in the month index.
    pub fn from_months(country_id: impl Into<String>, months: &[(i64, u64)]) -> Result<Self> {
        let country_id = country_id.into();
        let Some(&(first, _)) = months.first() else {
            return Err(Error::InvalidPanel(format!("country {country_id} has no observations")));
        };
        let mut gaps = Vec::new();
        for pair in months.windows(2) {
            let (a, b) = (pair[0].0, pair[1].0);
            if b <= a {
                return Err(Error::InvalidPanel(format!(
                    "country {country_id}: month {b} follows month {a}"
                )));
            }
            gaps.extend((a + 1..b).map(|m| (country_id.clone(), m)));
        }
        if !gaps.is_empty() {
            return Err(Error::IncompletePanel(gaps));
        }
        Self::new(country_id, first, months.iter().map(|&(_, x)| x).collect())
    }

    pub fn country_id(&self) -> &str {
        &self.country_id
    }

    pub fn first_month(&self) -> i64 {
        self.first_month
    }

    pub fn last_month(&self) -> i64 {
        self.first_month + self.counts.len() as i64 - 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    fn index(&self, month: i64) -> Option<usize> {
        let i = month - self.first_month;
        (0..self.counts.len() as i64).contains(&i).then_some(i as usize)
    }

    pub fn count(&self, month: i64) -> Option<u64> {
        self.index(month).map(|i| self.counts[i])
    }

    fn log_count(&self, month: i64) -> Option<f64> {
        self.index(month).map(|i| self.log_counts[i])
    }

    /// Months in `[from, to]` that the series does not cover.
    pub fn missing_in(&self, from: i64, to: i64) -> Vec<i64> {
        (from..=to).filter(|&m| self.index(m).is_none()).collect()
    }

    /// Realized `Y[t, s]`.
    pub fn target(&self, target_month: i64, lead_time: u32) -> Result<LogChangeTarget> {
        let then = target_month - lead_time as i64;
        match (self.log_count(target_month), self.log_count(then)) {
            (Some(now), Some(prev)) => Ok(LogChangeTarget {
                country_id: self.country_id.clone(),
                target_month,
                lead_time,
                value: now - prev,
            }),
            _ => Err(Error::InvalidParameter(format!(
                "country {}: months {then}..={target_month} not covered",
                self.country_id
            ))),
        }
    }
}

/// `Y[t, s] = log(x[t] + 1) - log(x[t - s] + 1)` for one country.
#[derive(Debug, Clone, PartialEq)]
pub struct LogChangeTarget {
    pub country_id: String,
    pub target_month: i64,
    pub lead_time: u32,
    pub value: f64,
}

/// `log((x_now + 1) / (x_then + 1))`, exactly zero for equal counts.
pub fn log_change(x_now: i64, x_then: i64) -> Result<f64> {
    if x_now < 0 || x_then < 0 {
        return Err(Error::InvalidParameter(format!(
            "fatality counts must be non-negative, got {x_now} and {x_then}"
        )));
    }
    Ok(log1p_count(x_now as u64) - log1p_count(x_then as u64))
}

/// Equal-weight distribution of the `w` log-changes implied by the last `w`
/// counts up to and including `issue_month`.
pub fn window_distribution(series: &FatalitySeries, issue_month: i64, w: usize) -> Result<DiscreteEmpirical> {
    if w == 0 {
        return Err(Error::InvalidParameter("window length must be at least 1".into()));
    }
    let first_producible = series.first_month + w as i64 - 1;
    if issue_month < first_producible {
        return Err(Error::InsufficientHistory {
            country: series.country_id.clone(),
            first_producible,
        });
    }
    let end = series.index(issue_month).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "country {}: issue month {issue_month} after last observed month {}",
            series.country_id,
            series.last_month()
        ))
    })?;
    let latest = series.log_counts[end];
    let atoms = series.log_counts[end + 1 - w..=end].iter().map(|&l| latest - l).collect();
    DiscreteEmpirical::new(atoms)
}

/// A point summary extracted from a predictive distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    Mean,
    Median,
    OpfTadda1L1,
    OpfTadda1L2,
    OpfTadda2L1,
    NoChange,
}

impl Functional {
    pub const ALL: [Functional; 6] = [
        Self::Mean,
        Self::Median,
        Self::OpfTadda1L1,
        Self::OpfTadda1L2,
        Self::OpfTadda2L1,
        Self::NoChange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Mean => "mean",
            Self::Median => "median",
            Self::OpfTadda1L1 => "opf_tadda1_l1",
            Self::OpfTadda1L2 => "opf_tadda1_l2",
            Self::OpfTadda2L1 => "opf_tadda2_l1",
            Self::NoChange => "no_change",
        }
    }

    /// The functional a score elicits.
    pub fn elicited_by(kind: crate::scores::ScoreKind) -> Self {
        use crate::scores::ScoreKind::*;
        match kind {
            Ae => Self::Median,
            Se => Self::Mean,
            Tadda1L1 => Self::OpfTadda1L1,
            Tadda1L2 => Self::OpfTadda1L2,
            Tadda2L1 => Self::OpfTadda2L1,
        }
    }

    pub fn forecast<D: PredictiveDistribution + ?Sized>(self, dist: &D, eps: f64) -> Result<f64> {
        Ok(match self {
            Self::Mean => opf::opf_se(dist),
            Self::Median => opf::opf_ae(dist),
            Self::OpfTadda1L1 => opf::opf_tadda1_l1(dist, eps)?.value,
            Self::OpfTadda1L2 => opf::opf_tadda1_l2(dist, eps)?.value,
            Self::OpfTadda2L1 => opf::opf_tadda2_l1(dist, eps)?.value,
            Self::NoChange => 0.0,
        })
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Functional {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown functional `{s}`")))
    }
}

/// One point forecast for one country, target month and lead time.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastRecord {
    pub country_id: String,
    pub target_month: i64,
    pub lead_time: u32,
    pub functional: Functional,
    pub y_hat: f64,
}

/// Every functional of `dist`, with TADDA optima at tolerance `eps`.
pub fn point_forecasts(dist: &DiscreteEmpirical, eps: f64) -> Result<BTreeMap<Functional, f64>> {
    Functional::ALL.into_iter().map(|f| Ok((f, f.forecast(dist, eps)?))).collect()
}
