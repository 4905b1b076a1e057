use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("probability level {0} outside the admissible range")]
    ProbabilityOutOfRange(f64),

    #[error("cannot parse score specification `{0}`")]
    ScoreParse(String),

    #[error("empty search grid: [{lo}, {hi}] with step {step}")]
    EmptyGrid { lo: f64, hi: f64, step: f64 },

    #[error("country {country}: insufficient history, first producible issue month is {first_producible}")]
    InsufficientHistory { country: String, first_producible: i64 },

    #[error("incomplete panel: {}", format_gaps(.0))]
    IncompletePanel(Vec<(String, i64)>),

    #[error("invalid panel: {0}")]
    InvalidPanel(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

fn format_gaps(gaps: &[(String, i64)]) -> String {
    const SHOWN: usize = 20;
    let mut out: Vec<String> = gaps
        .iter()
        .take(SHOWN)
        .map(|(c, m)| format!("(country {c}, month {m})"))
        .collect();
    if gaps.len() > SHOWN {
        out.push(format!("... and {} more", gaps.len() - SHOWN));
    }
    format!("missing {}", out.join(", "))
}
