//! Pointwise scoring functions `s(y_hat, y)`, negatively oriented.
//!
//! All TADDA variants add a direction-augmentation penalty to a distance
//! whenever forecast and outcome fall on different sides of the tolerance
//! region `[-eps, eps]`. The inequality strictness of each penalty is part of
//! its definition and differs between variants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance corresponding to a 5% relative change in fatalities.
pub const DEFAULT_EPSILON: f64 = 0.048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScoreKind {
    Ae,
    Se,
    Tadda1L1,
    Tadda1L2,
    Tadda2L1,
}

impl ScoreKind {
    pub fn is_tadda(self) -> bool {
        matches!(self, Self::Tadda1L1 | Self::Tadda1L2 | Self::Tadda2L1)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Ae => "ae",
            Self::Se => "se",
            Self::Tadda1L1 => "tadda1_l1",
            Self::Tadda1L2 => "tadda1_l2",
            Self::Tadda2L1 => "tadda2_l1",
        }
    }
}

/// A scoring function together with its tolerance, when it has one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ScoreSpec {
    kind: ScoreKind,
    epsilon: Option<f64>,
}

impl ScoreSpec {
    pub fn new(kind: ScoreKind, epsilon: Option<f64>) -> Result<Self> {
        match (kind.is_tadda(), epsilon) {
            (true, None) => Ok(Self { kind, epsilon: Some(DEFAULT_EPSILON) }),
            (true, Some(e)) => {
                check_eps(e)?;
                Ok(Self { kind, epsilon: Some(e) })
            }
            (false, None) => Ok(Self { kind, epsilon: None }),
            (false, Some(_)) => Err(Error::InvalidParameter(format!(
                "{} takes no tolerance",
                kind.name()
            ))),
        }
    }

    pub fn ae() -> Self {
        Self { kind: ScoreKind::Ae, epsilon: None }
    }

    pub fn se() -> Self {
        Self { kind: ScoreKind::Se, epsilon: None }
    }

    pub fn tadda1_l1(eps: f64) -> Result<Self> {
        Self::new(ScoreKind::Tadda1L1, Some(eps))
    }

    pub fn tadda1_l2(eps: f64) -> Result<Self> {
        Self::new(ScoreKind::Tadda1L2, Some(eps))
    }

    pub fn tadda2_l1(eps: f64) -> Result<Self> {
        Self::new(ScoreKind::Tadda2L1, Some(eps))
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    /// Evaluates the score; see [`score`].
    pub fn eval(&self, y_hat: f64, y: f64) -> Result<f64> {
        score(self, y_hat, y)
    }

    /// Score without input validation, for hot loops over already-checked data.
    #[inline]
    pub(crate) fn eval_unchecked(&self, y_hat: f64, y: f64) -> f64 {
        let eps = self.epsilon.unwrap_or(0.0);
        match self.kind {
            ScoreKind::Ae => (y_hat - y).abs(),
            ScoreKind::Se => (y_hat - y) * (y_hat - y),
            ScoreKind::Tadda1L1 => (y_hat - y).abs() + penalty1_l1(y_hat, y, eps),
            ScoreKind::Tadda1L2 => (y_hat - y) * (y_hat - y) + penalty1_l2(y_hat, y, eps),
            ScoreKind::Tadda2L1 => (y_hat - y).abs() + penalty2_l1(y_hat, y, eps),
        }
    }
}

impl fmt::Display for ScoreSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.epsilon {
            Some(e) => write!(f, "{}(eps={})", self.kind.name(), e),
            None => f.write_str(self.kind.name()),
        }
    }
}

impl FromStr for ScoreSpec {
    type Err = Error;

    /// Accepts `ae`, `se`, `tadda1_l1`, `tadda1_l1(eps=0.048)`, `tadda1_l1(0.048)`,
    /// case-insensitively and ignoring whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
        let bad = || Error::ScoreParse(s.to_string());
        let (name, arg) = match norm.find('(') {
            Some(i) => {
                let inner = norm[i + 1..].strip_suffix(')').ok_or_else(bad)?;
                let inner = inner
                    .strip_prefix("eps=")
                    .or_else(|| inner.strip_prefix("epsilon="))
                    .unwrap_or(inner);
                let eps: f64 = inner.parse().map_err(|_| bad())?;
                (&norm[..i], Some(eps))
            }
            None => (norm.as_str(), None),
        };
        let kind = match name {
            "ae" => ScoreKind::Ae,
            "se" => ScoreKind::Se,
            "tadda1_l1" | "tadda" | "tadda1" => ScoreKind::Tadda1L1,
            "tadda1_l2" => ScoreKind::Tadda1L2,
            "tadda2_l1" | "tadda2" => ScoreKind::Tadda2L1,
            _ => return Err(bad()),
        };
        Self::new(kind, arg)
    }
}

impl TryFrom<String> for ScoreSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ScoreSpec> for String {
    fn from(s: ScoreSpec) -> String {
        s.to_string()
    }
}

fn check_finite(y_hat: f64, y: f64) -> Result<()> {
    if !y_hat.is_finite() {
        return Err(Error::NonFinite("y_hat"));
    }
    if !y.is_finite() {
        return Err(Error::NonFinite("y"));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {eps}")));
    }
    Ok(())
}

#[inline]
fn penalty1_l1(y_hat: f64, y: f64, eps: f64) -> f64 {
    if y_hat > eps && y < -eps {
        y_hat - eps
    } else if y_hat < -eps && y > eps {
        -y_hat - eps
    } else {
        0.0
    }
}

#[inline]
fn penalty1_l2(y_hat: f64, y: f64, eps: f64) -> f64 {
    if y_hat > eps && y < -eps {
        (y_hat - eps) * (y_hat - eps)
    } else if y_hat < -eps && y > eps {
        (y_hat + eps) * (y_hat + eps)
    } else {
        0.0
    }
}

#[inline]
fn penalty2_l1(y_hat: f64, y: f64, eps: f64) -> f64 {
    let y_inside = (-eps..=eps).contains(&y);
    if (y_hat <= eps && y > eps) || (y_hat > eps && y_inside) {
        (y_hat - eps).abs()
    } else if (y_hat >= -eps && y < -eps) || (y_hat < -eps && y_inside) {
        (y_hat + eps).abs()
    } else {
        0.0
    }
}

pub fn absolute_error(y_hat: f64, y: f64) -> Result<f64> {
    check_finite(y_hat, y)?;
    Ok((y_hat - y).abs())
}

pub fn squared_error(y_hat: f64, y: f64) -> Result<f64> {
    check_finite(y_hat, y)?;
    Ok((y_hat - y) * (y_hat - y))
}

/// `|y_hat - y|` plus `y_hat - eps` when `y_hat > eps, y < -eps`, or
/// `-y_hat - eps` when `y_hat < -eps, y > eps`.
pub fn tadda1_l1(y_hat: f64, y: f64, eps: f64) -> Result<f64> {
    check_finite(y_hat, y)?;
    check_eps(eps)?;
    Ok((y_hat - y).abs() + penalty1_l1(y_hat, y, eps))
}

/// Squared distance plus the squared distance of `y_hat` to the nearer
/// tolerance boundary, under the same sign conditions as [`tadda1_l1`].
pub fn tadda1_l2(y_hat: f64, y: f64, eps: f64) -> Result<f64> {
    check_finite(y_hat, y)?;
    check_eps(eps)?;
    Ok((y_hat - y) * (y_hat - y) + penalty1_l2(y_hat, y, eps))
}

/// Absolute distance plus `|y_hat - eps|` when the outcome is above the
/// tolerance region but the forecast is not, or the outcome is inside while
/// the forecast is above; symmetrically `|y_hat + eps|` on the negative side.
pub fn tadda2_l1(y_hat: f64, y: f64, eps: f64) -> Result<f64> {
    check_finite(y_hat, y)?;
    check_eps(eps)?;
    Ok((y_hat - y).abs() + penalty2_l1(y_hat, y, eps))
}

pub fn score(spec: &ScoreSpec, y_hat: f64, y: f64) -> Result<f64> {
    check_finite(y_hat, y)?;
    Ok(spec.eval_unchecked(y_hat, y))
}
