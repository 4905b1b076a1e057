//! Direction-augmented scoring of log-change forecasts.
//!
//! The crate covers four layers:
//!
//! * [`scores`]: pointwise scoring functions (absolute error, squared error
//!   and the three TADDA variants).
//! * [`distributions`] and [`opf`]: predictive distributions and the
//!   closed-form optimal point forecasts (Bayes acts) they imply under each
//!   score, together with a grid-search oracle.
//! * [`forecaster`]: the window-based empirical forecaster for monthly
//!   fatality counts.
//! * [`evaluation`]: the rolling scoring harness, window calibration and
//!   summary statistics.
//!
//! The [`cli`] module wires these into the `tadda` binary.

pub mod cli;
pub mod distributions;
pub mod error;
pub mod evaluation;
pub mod forecaster;
pub mod opf;
pub mod par;
pub mod scores;
pub mod synthetic;

pub use distributions::{DiscreteEmpirical, PredictiveDistribution, SkewNormal, SkewNormalParams};
pub use error::{Error, Result};
pub use opf::{OpfCase, OpfResult};
pub use scores::{ScoreKind, ScoreSpec, DEFAULT_EPSILON};
