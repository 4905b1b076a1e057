//! File-based run configuration (TOML). Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::evaluation::{parse_month, EvaluationConfig, MonthRange, WindowChoice};
use crate::forecaster::Functional;
use crate::scores::{ScoreSpec, DEFAULT_EPSILON};

pub const DEFAULT_SEED: u64 = 20_230_301;
pub const DEFAULT_MC_SAMPLES: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum WindowSetting {
    Fixed(usize),
    Named(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkewNormalSection {
    pub xi: f64,
    pub omega: f64,
    pub alpha: f64,
}

impl Default for SkewNormalSection {
    fn default() -> Self {
        Self { xi: -0.15, omega: 0.4, alpha: 8.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub panel: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub mc_samples: usize,
    pub epsilon: f64,
    pub lead_times: Vec<u32>,
    pub window: WindowSetting,
    pub candidate_windows: Vec<usize>,
    pub calibration_period: [String; 2],
    pub test_period: [String; 2],
    pub scores: Vec<ScoreSpec>,
    pub functionals: Vec<Functional>,
    pub quantile_probs: Vec<f64>,
    pub skew_normal: SkewNormalSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            panel: None,
            out_dir: PathBuf::from("out"),
            seed: DEFAULT_SEED,
            mc_samples: DEFAULT_MC_SAMPLES,
            epsilon: DEFAULT_EPSILON,
            lead_times: (2..=7).collect(),
            window: WindowSetting::Fixed(9),
            candidate_windows: (2..=12).collect(),
            calibration_period: ["2014-01".into(), "2016-12".into()],
            test_period: ["2017-01".into(), "2019-12".into()],
            scores: vec![ScoreSpec::se(), ScoreSpec::tadda1_l1(DEFAULT_EPSILON).expect("positive")],
            functionals: vec![Functional::Mean, Functional::OpfTadda1L1, Functional::NoChange],
            quantile_probs: vec![0.05, 0.10, 0.15, 0.20, 0.75, 0.80, 0.85, 0.90, 0.95],
            skew_normal: SkewNormalSection::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn window_choice(&self) -> Result<WindowChoice> {
        match &self.window {
            WindowSetting::Fixed(w) => Ok(WindowChoice::Fixed(*w)),
            WindowSetting::Named(s) if s.eq_ignore_ascii_case("calibrate") => Ok(WindowChoice::Calibrate),
            WindowSetting::Named(s) => Err(Error::Config(format!("window must be an integer or \"calibrate\", got `{s}`"))),
        }
    }

    pub fn evaluation_config(&self) -> Result<EvaluationConfig> {
        let range = |p: &[String; 2]| MonthRange::new(parse_month(&p[0])?, parse_month(&p[1])?);
        let cfg = EvaluationConfig {
            calibration_period: range(&self.calibration_period)?,
            test_period: range(&self.test_period)?,
            lead_times: self.lead_times.clone(),
            window: self.window_choice()?,
            candidate_windows: self.candidate_windows.clone(),
            epsilon: self.epsilon,
            scores: self.scores.clone(),
            functionals: self.functionals.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.evaluation_config()?;
        if self.mc_samples == 0 {
            return Err(Error::Config("mc_samples must be at least 1".into()));
        }
        if self.quantile_probs.iter().any(|p| !(*p > 0.0 && *p <= 1.0)) {
            return Err(Error::Config("quantile_probs must lie in (0, 1]".into()));
        }
        if self.skew_normal.omega.is_nan() || self.skew_normal.omega <= 0.0 {
            return Err(Error::Config("skew_normal.omega must be positive".into()));
        }
        Ok(())
    }
}
