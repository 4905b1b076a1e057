//! Rolling evaluation harness, window calibration and summary statistics.

use std::fmt::Write as _;
use std::io;

use crate::distributions::{DiscreteEmpirical, PredictiveDistribution, SkewNormal, SkewNormalParams};
use crate::error::{Error, Result};
use crate::forecaster::{window_distribution, FatalitySeries, ForecastRecord, Functional, LogChangeTarget};
use crate::opf::{self, OpfCase};
use crate::par;
use crate::scores::{ScoreSpec, DEFAULT_EPSILON};

/// Month id in the ViEWS convention: January 1980 is month 1.
pub fn views_month_id(year: i32, month: u32) -> i64 {
    (year as i64 - 1980) * 12 + month as i64
}

/// Parses `YYYY-MM` into a ViEWS month id; a bare integer is taken as an id.
pub fn parse_month(s: &str) -> Result<i64> {
    let s = s.trim();
    if let Ok(id) = s.parse::<i64>() {
        return Ok(id);
    }
    let bad = || Error::Config(format!("cannot parse month `{s}`, expected YYYY-MM or a month id"));
    let (y, m) = s.split_once('-').ok_or_else(bad)?;
    let y: i32 = y.parse().map_err(|_| bad())?;
    let m: u32 = m.parse().map_err(|_| bad())?;
    if !(1..=12).contains(&m) {
        return Err(bad());
    }
    Ok(views_month_id(y, m))
}

/// Inclusive range of target months.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonthRange {
    pub start: i64,
    pub end: i64,
}

impl MonthRange {
    pub fn new(start: i64, end: i64) -> Result<Self> {
        if start > end {
            return Err(Error::Config(format!("empty month range {start}..={end}")));
        }
        Ok(Self { start, end })
    }

    pub fn months(&self) -> impl Iterator<Item = i64> {
        self.start..=self.end
    }

    pub fn len(&self) -> usize {
        (self.end - self.start + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowChoice {
    Fixed(usize),
    Calibrate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationConfig {
    pub calibration_period: MonthRange,
    pub test_period: MonthRange,
    pub lead_times: Vec<u32>,
    pub window: WindowChoice,
    pub candidate_windows: Vec<usize>,
    pub epsilon: f64,
    pub scores: Vec<ScoreSpec>,
    pub functionals: Vec<Functional>,
}

impl Default for EvaluationConfig {
    /// Calibration on 2014-01..2016-12, evaluation on 2017-01..2019-12,
    /// lead times 2 to 7, window 9.
    fn default() -> Self {
        Self {
            calibration_period: MonthRange { start: views_month_id(2014, 1), end: views_month_id(2016, 12) },
            test_period: MonthRange { start: views_month_id(2017, 1), end: views_month_id(2019, 12) },
            lead_times: (2..=7).collect(),
            window: WindowChoice::Fixed(9),
            candidate_windows: (2..=12).collect(),
            epsilon: DEFAULT_EPSILON,
            scores: vec![ScoreSpec::se(), ScoreSpec::tadda1_l1(DEFAULT_EPSILON).expect("positive")],
            functionals: vec![Functional::Mean, Functional::OpfTadda1L1, Functional::NoChange],
        }
    }
}

impl EvaluationConfig {
    pub fn validate(&self) -> Result<()> {
        let (c, t) = (self.calibration_period, self.test_period);
        if c.start > c.end || t.start > t.end {
            return Err(Error::Config("empty calibration or test period".into()));
        }
        if c.end >= t.start {
            return Err(Error::Config(format!(
                "calibration period ({}..={}) must end before the test period ({}..={}) starts",
                c.start, c.end, t.start, t.end
            )));
        }
        if self.lead_times.is_empty() || self.lead_times.iter().any(|s| !(1..=12).contains(s)) {
            return Err(Error::Config(format!("lead times must lie in 1..=12, got {:?}", self.lead_times)));
        }
        let mut sorted = self.lead_times.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.lead_times.len() {
            return Err(Error::Config("duplicate lead times".into()));
        }
        if let WindowChoice::Fixed(0) = self.window {
            return Err(Error::Config("window length must be at least 1".into()));
        }
        if self.candidate_windows.contains(&0) {
            return Err(Error::Config("candidate windows must be at least 1".into()));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.scores.is_empty() || self.functionals.is_empty() {
            return Err(Error::Config("at least one score and one functional required".into()));
        }
        Ok(())
    }

    fn sorted_leads(&self) -> Vec<u32> {
        let mut l = self.lead_times.clone();
        l.sort_unstable();
        l
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub mean: f64,
    pub n: usize,
}

/// Mean scores per (functional, score, lead time).
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationTable {
    pub window: usize,
    pub functionals: Vec<Functional>,
    pub scores: Vec<ScoreSpec>,
    pub lead_times: Vec<u32>,
    pub n_countries: usize,
    cells: Vec<Cell>,
}

impl EvaluationTable {
    fn idx(&self, f: usize, s: usize, l: usize) -> usize {
        (f * self.scores.len() + s) * self.lead_times.len() + l
    }

    fn position(&self, functional: Functional, score: &ScoreSpec) -> Option<(usize, usize)> {
        let f = self.functionals.iter().position(|&x| x == functional)?;
        let s = self.scores.iter().position(|x| x == score)?;
        Some((f, s))
    }

    pub fn cell(&self, functional: Functional, score: &ScoreSpec, lead_time: u32) -> Option<Cell> {
        let (f, s) = self.position(functional, score)?;
        let l = self.lead_times.iter().position(|&x| x == lead_time)?;
        Some(self.cells[self.idx(f, s, l)])
    }

    /// Per-lead-time means of one (functional, score) column, ascending lead.
    pub fn column(&self, functional: Functional, score: &ScoreSpec) -> Option<Vec<f64>> {
        let (f, s) = self.position(functional, score)?;
        Some((0..self.lead_times.len()).map(|l| self.cells[self.idx(f, s, l)].mean).collect())
    }

    /// Unweighted mean of the per-lead-time cells.
    pub fn column_mean(&self, functional: Functional, score: &ScoreSpec) -> Option<f64> {
        let col = self.column(functional, score)?;
        Some(col.iter().sum::<f64>() / col.len() as f64)
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["functional".to_string(), "score".to_string()];
        header.extend(self.lead_times.iter().map(|s| format!("s{s}")));
        header.push("grand_mean".into());
        w.write_record(&header)?;
        for &f in &self.functionals {
            for sc in &self.scores {
                let mut row = vec![f.to_string(), sc.to_string()];
                let col = self.column(f, sc).expect("own column");
                row.extend(col.iter().map(|v| v.to_string()));
                row.push(self.column_mean(f, sc).expect("own column").to_string());
                w.write_record(&row)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Aligned markdown with three decimals, one row per (functional, score).
    pub fn to_markdown(&self) -> String {
        let mut header = vec!["functional".to_string(), "score".to_string()];
        header.extend(self.lead_times.iter().map(|s| format!("s={s}")));
        header.push("mean".into());
        let mut rows = Vec::new();
        for &f in &self.functionals {
            for sc in &self.scores {
                let mut row = vec![f.to_string(), sc.to_string()];
                row.extend(self.column(f, sc).expect("own column").iter().map(|v| format!("{v:.3}")));
                row.push(format!("{:.3}", self.column_mean(f, sc).expect("own column")));
                rows.push(row);
            }
        }
        markdown_table(&header, &rows)
    }
}

pub(crate) fn markdown_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: &[String]| {
        let body: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        format!("| {} |\n", body.join(" | "))
    };
    let mut s = line(header);
    let sep: Vec<String> = widths.iter().map(|w| format!("{}:", "-".repeat(w + 1))).collect();
    let _ = writeln!(s, "|{}|", sep.join("|"));
    for r in rows {
        s.push_str(&line(r));
    }
    s
}

/// Full output of one evaluation pass: the table plus every forecast and
/// realized target, ordered by (country, target month, lead time).
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRun {
    pub table: EvaluationTable,
    pub records: Vec<ForecastRecord>,
    pub targets: Vec<LogChangeTarget>,
}

struct CountryPass {
    sums: Vec<f64>,
    counts: Vec<usize>,
    records: Vec<ForecastRecord>,
    targets: Vec<LogChangeTarget>,
}

/// Checks that every country covers every month the evaluation touches.
fn check_coverage(panel: &[FatalitySeries], period: MonthRange, leads: &[u32], w: usize) -> Result<()> {
    let max_lead = *leads.iter().max().expect("non-empty leads") as i64;
    let from = period.start - max_lead - (w as i64 - 1);
    let gaps: Vec<(String, i64)> = panel
        .iter()
        .flat_map(|s| s.missing_in(from, period.end).into_iter().map(|m| (s.country_id().to_string(), m)))
        .collect();
    if gaps.is_empty() {
        Ok(())
    } else {
        Err(Error::IncompletePanel(gaps))
    }
}

fn evaluate_country(
    series: &FatalitySeries,
    period: MonthRange,
    leads: &[u32],
    w: usize,
    eps: f64,
    functionals: &[Functional],
    scores: &[ScoreSpec],
) -> Result<CountryPass> {
    let (nf, ns, nl) = (functionals.len(), scores.len(), leads.len());
    let mut pass = CountryPass {
        sums: vec![0.0; nf * ns * nl],
        counts: vec![0; nf * ns * nl],
        records: Vec::with_capacity(period.len() * nl * nf),
        targets: Vec::with_capacity(period.len() * nl),
    };
    // forecasts depend on the issue month only
    let min_lead = *leads.iter().min().expect("non-empty leads") as i64;
    let max_lead = *leads.iter().max().expect("non-empty leads") as i64;
    let first_issue = period.start - max_lead;
    let issues = (period.end - min_lead - first_issue + 1) as usize;
    let mut forecasts = Vec::with_capacity(issues);
    for k in 0..issues {
        let dist: DiscreteEmpirical = window_distribution(series, first_issue + k as i64, w)?;
        let row: Result<Vec<f64>> = functionals.iter().map(|f| f.forecast(&dist, eps)).collect();
        forecasts.push(row?);
    }
    for t in period.months() {
        for (l, &s) in leads.iter().enumerate() {
            let target = series.target(t, s)?;
            let fc = &forecasts[(t - s as i64 - first_issue) as usize];
            for (f, (&functional, &y_hat)) in functionals.iter().zip(fc).enumerate() {
                for (sc, spec) in scores.iter().enumerate() {
                    let i = (f * ns + sc) * nl + l;
                    pass.sums[i] += spec.eval_unchecked(y_hat, target.value);
                    pass.counts[i] += 1;
                }
                pass.records.push(ForecastRecord {
                    country_id: series.country_id().to_string(),
                    target_month: t,
                    lead_time: s,
                    functional,
                    y_hat,
                });
            }
            pass.targets.push(target);
        }
    }
    Ok(pass)
}

/// Scores the window forecaster of length `w` over the target months of
/// `period`. Countries are processed in parallel and combined in
/// ascending country-id order.
pub fn evaluate_period(
    panel: &[FatalitySeries],
    period: MonthRange,
    w: usize,
    lead_times: &[u32],
    eps: f64,
    functionals: &[Functional],
    scores: &[ScoreSpec],
) -> Result<EvaluationRun> {
    if panel.is_empty() {
        return Err(Error::InvalidPanel("panel contains no countries".into()));
    }
    if w == 0 {
        return Err(Error::InvalidParameter("window length must be at least 1".into()));
    }
    let mut leads = lead_times.to_vec();
    leads.sort_unstable();
    check_coverage(panel, period, &leads, w)?;
    let mut order: Vec<&FatalitySeries> = panel.iter().collect();
    order.sort_by(|a, b| a.country_id().cmp(b.country_id()));

    let passes = par::map(&order, |s| evaluate_country(s, period, &leads, w, eps, functionals, scores));
    let size = functionals.len() * scores.len() * leads.len();
    let mut sums = vec![0.0; size];
    let mut counts = vec![0usize; size];
    let mut records = Vec::new();
    let mut targets = Vec::new();
    for pass in passes {
        let pass = pass?;
        for i in 0..size {
            sums[i] += pass.sums[i];
            counts[i] += pass.counts[i];
        }
        records.extend(pass.records);
        targets.extend(pass.targets);
    }
    let cells = sums.iter().zip(&counts).map(|(&s, &n)| Cell { mean: s / n as f64, n }).collect();
    Ok(EvaluationRun {
        table: EvaluationTable {
            window: w,
            functionals: functionals.to_vec(),
            scores: scores.to_vec(),
            lead_times: leads,
            n_countries: panel.len(),
            cells,
        },
        records,
        targets,
    })
}

fn objective_for(config: &EvaluationConfig) -> ScoreSpec {
    config
        .scores
        .iter()
        .copied()
        .find(|s| s.kind().is_tadda())
        .unwrap_or_else(|| ScoreSpec::tadda1_l1(config.epsilon).expect("validated epsilon"))
}

/// Evaluates on the test period, calibrating the window first when asked.
pub fn run_evaluation_detailed(panel: &[FatalitySeries], config: &EvaluationConfig) -> Result<EvaluationRun> {
    config.validate()?;
    let w = match config.window {
        WindowChoice::Fixed(w) => w,
        WindowChoice::Calibrate => {
            calibrate_window(panel, config, &config.candidate_windows, &objective_for(config))?
        }
    };
    evaluate_period(
        panel,
        config.test_period,
        w,
        &config.sorted_leads(),
        config.epsilon,
        &config.functionals,
        &config.scores,
    )
}

pub fn run_evaluation(panel: &[FatalitySeries], config: &EvaluationConfig) -> Result<EvaluationTable> {
    run_evaluation_detailed(panel, config).map(|r| r.table)
}

/// Grand-mean calibration-period score of the functional elicited by
/// `objective`, for each candidate window length in the given order.
pub fn calibration_curve(
    panel: &[FatalitySeries],
    config: &EvaluationConfig,
    candidates: &[usize],
    objective: &ScoreSpec,
) -> Result<Vec<(usize, f64)>> {
    config.validate()?;
    let functional = Functional::elicited_by(objective.kind());
    let eps = objective.epsilon().unwrap_or(config.epsilon);
    candidates
        .iter()
        .map(|&w| {
            let run = evaluate_period(
                panel,
                config.calibration_period,
                w,
                &config.sorted_leads(),
                eps,
                &[functional],
                &[*objective],
            )?;
            Ok((w, run.table.column_mean(functional, objective).expect("own column")))
        })
        .collect()
}

/// Window length minimizing the calibration-period objective; ties go to
/// the smallest window.
pub fn calibrate_window(
    panel: &[FatalitySeries],
    config: &EvaluationConfig,
    candidates: &[usize],
    objective: &ScoreSpec,
) -> Result<usize> {
    if candidates.len() < 2 {
        return Err(Error::Config("window calibration needs at least two candidates".into()));
    }
    let curve = calibration_curve(panel, config, candidates, objective)?;
    let best = curve
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("non-empty candidates");
    Ok(best.0)
}

/// Type-1 quantiles of pooled forecasts and realized values.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileSummary {
    pub probs: Vec<f64>,
    pub rows: Vec<(String, Vec<f64>)>,
}

impl QuantileSummary {
    pub fn row(&self, label: &str) -> Option<&[f64]> {
        self.rows.iter().find(|(l, _)| l == label).map(|(_, v)| v.as_slice())
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["series".to_string()];
        header.extend(self.probs.iter().map(|p| format!("q{p}")));
        w.write_record(&header)?;
        for (label, vals) in &self.rows {
            let mut row = vec![label.clone()];
            row.extend(vals.iter().map(|v| v.to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_markdown(&self) -> String {
        let mut header = vec![String::new()];
        header.extend(self.probs.iter().map(|p| format!("{}%", p * 100.0)));
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|(l, v)| std::iter::once(l.clone()).chain(v.iter().map(|x| format!("{x:.3}"))).collect())
            .collect();
        markdown_table(&header, &rows)
    }
}

pub const TRUE_LOG_CHANGES: &str = "true_log_changes";

/// Type-1 quantiles of the mean forecasts, the TADDA1-L1 forecasts and the
/// realized log-changes, pooled over lead times.
pub fn forecast_quantile_summary(
    records: &[ForecastRecord],
    targets: &[LogChangeTarget],
    probs: &[f64],
) -> Result<QuantileSummary> {
    let pick = |f: Functional| records.iter().filter(|r| r.functional == f).map(|r| r.y_hat).collect::<Vec<_>>();
    let sets = [
        (Functional::Mean.name().to_string(), pick(Functional::Mean)),
        (Functional::OpfTadda1L1.name().to_string(), pick(Functional::OpfTadda1L1)),
        (TRUE_LOG_CHANGES.to_string(), targets.iter().map(|t| t.value).collect()),
    ];
    let mut rows = Vec::new();
    for (label, values) in sets {
        if values.is_empty() {
            return Err(Error::InvalidParameter(format!("no values for `{label}`")));
        }
        let dist = DiscreteEmpirical::new(values)?;
        let q: Result<Vec<f64>> = probs.iter().map(|&p| dist.quantile_type1(p)).collect();
        rows.push((label, q?));
    }
    Ok(QuantileSummary { probs: probs.to_vec(), rows })
}

/// Fraction of values with `|v| <= tol`.
pub fn zero_share(values: &[f64], tol: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().filter(|v| v.abs() <= tol).count() as f64 / values.len() as f64
}

/// Optimal forecasts of a skew normal predictive distribution and the
/// expected scores of each under AE, SE and TADDA1-L1.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub params: SkewNormalParams,
    pub epsilon: f64,
    pub mc_samples: usize,
    pub seed: u64,
    pub median: f64,
    pub mean: f64,
    pub opf_tadda: f64,
    pub opf_case: OpfCase,
    pub pi_minus: f64,
    pub pi_plus: f64,
    /// Rows: median, mean, OPF TADDA, zero. Columns: AE, SE, TADDA.
    pub expected: [[f64; 3]; 4],
}

impl SimulationReport {
    pub const ROWS: [&'static str; 4] = ["median", "mean", "opf_tadda", "zero"];
    pub const COLUMNS: [&'static str; 3] = ["ae", "se", "tadda"];

    pub fn write_functionals_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["score", "functional", "value"])?;
        w.write_record(["ae", "median", &self.median.to_string()])?;
        w.write_record(["se", "mean", &self.mean.to_string()])?;
        w.write_record(["tadda", self.opf_case.label(), &self.opf_tadda.to_string()])?;
        w.flush()?;
        Ok(())
    }

    pub fn write_expected_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["functional", "ae", "se", "tadda"])?;
        for (name, row) in Self::ROWS.iter().zip(&self.expected) {
            w.write_record([name.to_string(), row[0].to_string(), row[1].to_string(), row[2].to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "skew normal xi={} omega={} alpha={}, eps={}, {} draws, seed {}\n",
            self.params.xi, self.params.omega, self.params.alpha, self.epsilon, self.mc_samples, self.seed
        );
        let _ = writeln!(s, "Pr(Y < -eps) = {:.3}, Pr(Y > eps) = {:.3}\n", self.pi_minus, self.pi_plus);
        let h: Vec<String> = ["", "AE", "SE", "TADDA"].iter().map(|x| x.to_string()).collect();
        let f = vec![vec![
            "value".to_string(),
            format!("{:.3}", self.median),
            format!("{:.3}", self.mean),
            format!("{:.3}", self.opf_tadda),
        ]];
        s.push_str(&markdown_table(&h, &f));
        s.push('\n');
        let h: Vec<String> = ["functional", "AE", "SE", "TADDA"].iter().map(|x| x.to_string()).collect();
        let rows: Vec<Vec<String>> = Self::ROWS
            .iter()
            .zip(&self.expected)
            .map(|(n, r)| std::iter::once(n.to_string()).chain(r.iter().map(|v| format!("{v:.3}"))).collect())
            .collect();
        s.push_str(&markdown_table(&h, &rows));
        s
    }
}

pub fn simulation_report(params: SkewNormalParams, eps: f64, mc_samples: usize, seed: u64) -> Result<SimulationReport> {
    if mc_samples == 0 {
        return Err(Error::InvalidParameter("mc_samples must be at least 1".into()));
    }
    let dist = SkewNormal::new(params);
    let tadda = ScoreSpec::tadda1_l1(eps)?;
    let opf_t = opf::opf_tadda1_l1(&dist, eps)?;
    let median = opf::opf_ae(&dist);
    let mean = opf::opf_se(&dist);
    let sample = dist.sample(mc_samples, seed);
    let specs = [ScoreSpec::ae(), ScoreSpec::se(), tadda];
    let mut expected = [[0.0; 3]; 4];
    for (row, y_hat) in expected.iter_mut().zip([median, mean, opf_t.value, 0.0]) {
        for (cell, spec) in row.iter_mut().zip(&specs) {
            *cell = opf::expected_score_on(&sample, spec, y_hat)?;
        }
    }
    Ok(SimulationReport {
        params,
        epsilon: eps,
        mc_samples,
        seed,
        median,
        mean,
        opf_tadda: opf_t.value,
        opf_case: opf_t.case,
        pi_minus: dist.prob_below(-eps),
        pi_plus: dist.prob_above(eps),
        expected,
    })
}

/// Published country-month scores of the ViEWS ensemble, lead times 2 to 7
/// followed by the column mean. External reference values for side-by-side
/// reporting only; nothing in this crate reproduces them.
pub mod reference {
    pub const VIEWS_ENSEMBLE_MSE: [f64; 7] = [0.504, 0.551, 0.579, 0.548, 0.573, 0.599, 0.559];
    pub const VIEWS_ENSEMBLE_TADDA: [f64; 7] = [0.371, 0.379, 0.394, 0.381, 0.386, 0.400, 0.385];
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn month_ids() {
        assert_eq!(views_month_id(1980, 1), 1);
        assert_eq!(parse_month("2014-01").unwrap(), 409);
        assert_eq!(parse_month("2016-12").unwrap(), 444);
        assert_eq!(parse_month("2017-01").unwrap(), 445);
        assert_eq!(parse_month("2019-12").unwrap(), 480);
        assert_eq!(parse_month("445").unwrap(), 445);
        assert!(parse_month("2019-13").is_err());
        assert!(parse_month("soon").is_err());
    }

    #[test]
    fn zero_share_examples() {
        assert!((zero_share(&[0.0, 0.0, 1.0], 0.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(zero_share(&[0.01, -0.02], 0.02), 1.0);
        assert!(zero_share(&[], 0.0).is_nan());
    }

    #[test]
    fn config_validation() {
        let mut c = EvaluationConfig::default();
        assert!(c.validate().is_ok());
        c.lead_times = vec![0, 2];
        assert!(c.validate().is_err());
        let mut c = EvaluationConfig::default();
        c.calibration_period = c.test_period;
        assert!(c.validate().is_err());
        let c = EvaluationConfig { window: WindowChoice::Fixed(0), ..EvaluationConfig::default() };
        assert!(c.validate().is_err());
    }

    fn zero_panel(n: usize, months: usize) -> Vec<FatalitySeries> {
        (0..n).map(|i| FatalitySeries::new(format!("c{i}"), 1, vec![0; months]).unwrap()).collect()
    }

    #[test]
    fn all_zero_panel_scores_zero() {
        let panel = zero_panel(3, 60);
        let period = MonthRange::new(30, 60).unwrap();
        let cfg = EvaluationConfig::default();
        let run = evaluate_period(&panel, period, 9, &[2, 3, 4, 5, 6, 7], 0.048, &cfg.functionals, &cfg.scores).unwrap();
        for f in &cfg.functionals {
            for s in &cfg.scores {
                assert!(run.table.column(*f, s).unwrap().iter().all(|&v| v == 0.0));
                assert_eq!(run.table.cell(*f, s, 2).unwrap().n, 3 * 31);
            }
        }
        let q = forecast_quantile_summary(&run.records, &run.targets, &[0.05, 0.5, 0.95]).unwrap();
        assert!(q.rows.iter().all(|(_, v)| v.iter().all(|&x| x == 0.0)));
    }

    #[test]
    fn missing_history_is_reported_as_gaps() {
        let panel = zero_panel(2, 20);
        let period = MonthRange::new(10, 20).unwrap();
        match evaluate_period(&panel, period, 9, &[2, 7], 0.048, &[Functional::Mean], &[ScoreSpec::se()]) {
            Err(Error::IncompletePanel(g)) => {
                // months -5..=0 missing for both countries
                assert_eq!(g.len(), 12);
                assert!(g.contains(&("c0".to_string(), 0)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn calibrate_needs_two_candidates() {
        let panel = zero_panel(1, 100);
        let cfg = EvaluationConfig {
            calibration_period: MonthRange::new(40, 60).unwrap(),
            test_period: MonthRange::new(61, 100).unwrap(),
            ..Default::default()
        };
        let obj = ScoreSpec::tadda1_l1(0.048).unwrap();
        assert!(calibrate_window(&panel, &cfg, &[3], &obj).is_err());
        // all candidates tie on an all-zero panel: smallest wins
        assert_eq!(calibrate_window(&panel, &cfg, &[5, 3, 4], &obj).unwrap(), 3);
    }

    #[test]
    fn simulation_symmetric_case() {
        let p = SkewNormalParams::new(0.0, 0.4, 0.0).unwrap();
        let r = simulation_report(p, 0.048, 50_000, 3).unwrap();
        assert!(r.median.abs() < 1e-9 && r.mean.abs() < 1e-15 && r.opf_tadda.abs() < 1e-9);
        assert_eq!(r.opf_case, OpfCase::MedianInTolerance);
        assert_eq!(r.expected[3][0], r.expected[3][2]);
    }

    #[test]
    fn markdown_is_aligned() {
        let t = markdown_table(&["a".into(), "bbb".into()], &[vec!["10".into(), "2".into()]]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|l| l.len() == lines[0].len()));
    }
}
