//! The `tadda` command line: `score`, `opf`, `simulate`, `evaluate` and
//! `calibrate`.
//!
//! Exit codes: 0 on success, 1 on runtime or data errors, 2 on usage and
//! parse errors.

pub mod config;
pub mod panel;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use crate::distributions::{DiscreteEmpirical, PredictiveDistribution, SkewNormal, SkewNormalParams};
use crate::evaluation::{self, reference, EvaluationTable};
use crate::forecaster::{FatalitySeries, Functional};
use crate::opf::{self, Grid};
use crate::scores::{ScoreKind, ScoreSpec};
use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "tadda", version, about = "Direction-augmented scoring and optimal point forecasts")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Seed for every stochastic step.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory for report files.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score a single forecast against an outcome.
    Score(ScoreArgs),
    /// Optimal point forecast of a predictive distribution.
    Opf(OpfArgs),
    /// Expected scores of point forecasts under a skew normal distribution.
    Simulate(SimulateArgs),
    /// Rolling evaluation of the window forecaster on a fatality panel.
    Evaluate(PanelArgs),
    /// Choose the window length on the calibration period.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// ae, se, tadda1_l1, tadda1_l2, tadda2_l1, optionally with `(eps=..)`.
    pub spec: String,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long = "yhat", allow_negative_numbers = true)]
    pub y_hat: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub y: f64,
}

#[derive(Debug, Args)]
pub struct OpfArgs {
    /// Skew normal location, scale and slant.
    #[arg(long, num_args = 3, value_names = ["XI", "OMEGA", "ALPHA"], allow_negative_numbers = true,
          conflicts_with = "atoms", required_unless_present = "atoms")]
    pub skew_normal: Option<Vec<f64>>,
    /// Comma-separated equal-weight atoms.
    #[arg(long, allow_hyphen_values = true)]
    pub atoms: Option<String>,
    #[arg(long)]
    pub score: String,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Also print the grid-search optimum.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub mc_samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PanelArgs {
    /// Panel CSV (`country_id,month_id,fatalities`).
    #[arg(long)]
    pub panel: Option<PathBuf>,
    /// Window length, or `calibrate`.
    #[arg(long)]
    pub window: Option<String>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub panel: Option<PathBuf>,
    /// Candidate window lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub candidates: Option<Vec<usize>>,
    /// Objective score; defaults to the first TADDA score of the config.
    #[arg(long)]
    pub objective: Option<String>,
}

/// Failure classified by exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(e) | Failure::Runtime(e) => write!(f, "{e:#}"),
        }
    }
}

fn usage<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Usage(e.into())
}

fn runtime<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Runtime(e.into())
}

type CmdResult = Result<(), Failure>;

/// Parses `args` and runs the command, writing human-readable output to `out`.
pub fn main_with_args<I, T, W>(args: I, out: &mut W) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli, out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p).map_err(usage)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out_dir = o.clone();
    }
    Ok(cfg)
}

pub fn run<W: Write>(cli: &Cli, out: &mut W) -> CmdResult {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Score(a) => cmd_score(a, out),
        Command::Opf(a) => cmd_opf(a, &cfg, out),
        Command::Simulate(a) => cmd_simulate(a, cfg, out),
        Command::Evaluate(a) => cmd_evaluate(a, cfg, out),
        Command::Calibrate(a) => cmd_calibrate(a, cfg, out),
    }
}

/// Score spec from a name plus an optional `--eps`, which overrides any
/// tolerance embedded in the name.
fn resolve_spec(name: &str, eps: Option<f64>) -> anyhow::Result<ScoreSpec> {
    let spec: ScoreSpec = name.parse()?;
    match eps {
        Some(e) => Ok(ScoreSpec::new(spec.kind(), Some(e))?),
        None => Ok(spec),
    }
}

fn cmd_score<W: Write>(a: &ScoreArgs, out: &mut W) -> CmdResult {
    let spec = resolve_spec(&a.spec, a.eps).map_err(usage)?;
    let v = spec.eval(a.y_hat, a.y).map_err(usage)?;
    writeln!(out, "{v:.6}").map_err(runtime)
}

fn cmd_opf<W: Write>(a: &OpfArgs, cfg: &RunConfig, out: &mut W) -> CmdResult {
    let spec = resolve_spec(&a.score, a.eps).map_err(usage)?;
    let eps = spec.epsilon().unwrap_or(0.0);
    let dist: Box<dyn PredictiveDistribution> = match (&a.skew_normal, &a.atoms) {
        (Some(p), _) => Box::new(SkewNormal::from_parts(p[0], p[1], p[2]).map_err(usage)?),
        (None, Some(list)) => {
            let atoms: Result<Vec<f64>, _> = list.split(',').map(|s| s.trim().parse::<f64>()).collect();
            let atoms = atoms.map_err(|e| usage(anyhow!("bad atom list `{list}`: {e}")))?;
            Box::new(DiscreteEmpirical::new(atoms).map_err(usage)?)
        }
        (None, None) => return Err(usage(anyhow!("either --skew-normal or --atoms is required"))),
    };
    let r = opf::opf(dist.as_ref(), &spec).map_err(runtime)?;
    writeln!(out, "{:.6}\t{}", r.value, r.case).map_err(runtime)?;
    if a.oracle {
        let grid = Grid::around(dist.as_ref(), eps).map_err(runtime)?;
        let samples = cfg.mc_samples.min(1_000_000);
        let b = opf::brute_force_opf(dist.as_ref(), &spec, &grid, samples, cfg.seed).map_err(runtime)?;
        writeln!(out, "{b:.6}\toracle").map_err(runtime)?;
    }
    Ok(())
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> CmdResult {
    fs::write(dir.join(name), bytes).with_context(|| format!("writing {}", dir.join(name).display())).map_err(runtime)
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(runtime)?;
    Ok(buf)
}

fn cmd_simulate<W: Write>(a: &SimulateArgs, cfg: RunConfig, out: &mut W) -> CmdResult {
    let sn = cfg.skew_normal;
    let params = SkewNormalParams::new(
        a.xi.unwrap_or(sn.xi),
        a.omega.unwrap_or(sn.omega),
        a.alpha.unwrap_or(sn.alpha),
    )
    .map_err(usage)?;
    let eps = a.eps.unwrap_or(cfg.epsilon);
    let n = a.mc_samples.unwrap_or(cfg.mc_samples);
    let report = evaluation::simulation_report(params, eps, n, cfg.seed).map_err(usage)?;
    let all_finite = report.expected.iter().flatten().all(|v| v.is_finite())
        && [report.median, report.mean, report.opf_tadda].iter().all(|v| v.is_finite());
    if !all_finite {
        return Err(runtime(anyhow!("numerical failure: non-finite expected score")));
    }
    fs::create_dir_all(&cfg.out_dir).map_err(runtime)?;
    write_file(&cfg.out_dir, "simulation_functionals.csv", &csv_bytes(|b| report.write_functionals_csv(b))?)?;
    write_file(&cfg.out_dir, "simulation_expected_scores.csv", &csv_bytes(|b| report.write_expected_csv(b))?)?;
    let dist = SkewNormal::new(params);
    let mut density = String::from("x,pdf,cdf\n");
    let (lo, hi) = (params.xi - 2.0 * params.omega, params.xi + 4.0 * params.omega);
    for i in 0..=600 {
        let x = lo + (hi - lo) * i as f64 / 600.0;
        density.push_str(&format!("{x},{},{}\n", dist.pdf(x).map_err(runtime)?, dist.cdf(x)));
    }
    write_file(&cfg.out_dir, "simulation_density.csv", density.as_bytes())?;
    let md = report.to_markdown();
    write_file(&cfg.out_dir, "simulation.md", md.as_bytes())?;
    write!(out, "{md}").map_err(runtime)
}

fn load_panel(arg: &Option<PathBuf>, cfg: &RunConfig) -> Result<Vec<FatalitySeries>, Failure> {
    let path = arg
        .as_ref()
        .or(cfg.panel.as_ref())
        .ok_or_else(|| usage(anyhow!("no panel file given (use --panel or `panel` in the config)")))?;
    panel::read_panel_file(path).map_err(runtime)
}

/// Adds the external ensemble reference columns when the table has the
/// published layout (SE and TADDA1-L1 at 0.048 over lead times 2 to 7).
fn reference_markdown(table: &EvaluationTable) -> Option<String> {
    let se = ScoreSpec::se();
    let tadda = ScoreSpec::tadda1_l1(0.048).ok()?;
    if table.lead_times != [2, 3, 4, 5, 6, 7] {
        return None;
    }
    let fs = [Functional::Mean, Functional::OpfTadda1L1, Functional::NoChange];
    let mut cols: Vec<(String, Vec<f64>)> = Vec::new();
    for (label, spec, reference) in
        [("MSE", se, reference::VIEWS_ENSEMBLE_MSE), ("TADDA", tadda, reference::VIEWS_ENSEMBLE_TADDA)]
    {
        for f in fs {
            let mut col = table.column(f, &spec)?;
            col.push(table.column_mean(f, &spec)?);
            cols.push((format!("{label} {f}"), col));
        }
        cols.push((format!("{label} ViEWS (external)"), reference.to_vec()));
    }
    let mut header = vec!["s".to_string()];
    header.extend(cols.iter().map(|(h, _)| h.clone()));
    let rows: Vec<Vec<String>> = (0..7)
        .map(|r| {
            let lead = if r < 6 { table.lead_times[r].to_string() } else { "mean".into() };
            std::iter::once(lead).chain(cols.iter().map(|(_, c)| format!("{:.3}", c[r]))).collect()
        })
        .collect();
    Some(evaluation::markdown_table(&header, &rows))
}

fn cmd_evaluate<W: Write>(a: &PanelArgs, mut cfg: RunConfig, out: &mut W) -> CmdResult {
    if let Some(w) = &a.window {
        cfg.window = match w.parse::<usize>() {
            Ok(n) => config::WindowSetting::Fixed(n),
            Err(_) => config::WindowSetting::Named(w.clone()),
        };
    }
    let ecfg = cfg.evaluation_config().map_err(usage)?;
    let panel = load_panel(&a.panel, &cfg)?;
    let run = evaluation::run_evaluation_detailed(&panel, &ecfg).map_err(runtime)?;
    fs::create_dir_all(&cfg.out_dir).map_err(runtime)?;
    let dir = &cfg.out_dir;
    write_file(dir, "evaluation.csv", &csv_bytes(|b| run.table.write_csv(b))?)?;

    let mut md = format!(
        "window w = {}, {} countries, target months {}..={}\n\n",
        run.table.window, run.table.n_countries, ecfg.test_period.start, ecfg.test_period.end
    );
    md.push_str(&run.table.to_markdown());
    if let Some(r) = reference_markdown(&run.table) {
        md.push('\n');
        md.push_str(&r);
    }

    let has = |f: Functional| ecfg.functionals.contains(&f);
    if has(Functional::Mean) && has(Functional::OpfTadda1L1) {
        let q = evaluation::forecast_quantile_summary(&run.records, &run.targets, &cfg.quantile_probs)
            .map_err(runtime)?;
        write_file(dir, "quantiles.csv", &csv_bytes(|b| q.write_csv(b))?)?;
        md.push('\n');
        md.push_str(&q.to_markdown());
    }

    let mut zs = String::from("series,zero_share\n");
    let truth: Vec<f64> = run.targets.iter().map(|t| t.value).collect();
    zs.push_str(&format!("{},{}\n", evaluation::TRUE_LOG_CHANGES, evaluation::zero_share(&truth, 0.0)));
    for &f in &ecfg.functionals {
        let v: Vec<f64> = run.records.iter().filter(|r| r.functional == f).map(|r| r.y_hat).collect();
        zs.push_str(&format!("{f},{}\n", evaluation::zero_share(&v, 0.0)));
    }
    write_file(dir, "zero_shares.csv", zs.as_bytes())?;
    md.push_str("\nzero shares\n\n");
    for line in zs.lines().skip(1) {
        let (k, v) = line.split_once(',').expect("two columns");
        md.push_str(&format!("- {k}: {:.1}%\n", v.parse::<f64>().expect("own output") * 100.0));
    }

    let mut fc = String::from("country_id,target_month,lead_time,functional,y_hat\n");
    for r in &run.records {
        fc.push_str(&format!("{},{},{},{},{}\n", r.country_id, r.target_month, r.lead_time, r.functional, r.y_hat));
    }
    write_file(dir, "forecasts.csv", fc.as_bytes())?;
    write_file(dir, "evaluation.md", md.as_bytes())?;
    write!(out, "{md}").map_err(runtime)
}

fn cmd_calibrate<W: Write>(a: &CalibrateArgs, cfg: RunConfig, out: &mut W) -> CmdResult {
    let ecfg = cfg.evaluation_config().map_err(usage)?;
    let candidates = a.candidates.clone().unwrap_or_else(|| ecfg.candidate_windows.clone());
    let objective = match &a.objective {
        Some(s) => s.parse::<ScoreSpec>().map_err(usage)?,
        None => ecfg
            .scores
            .iter()
            .copied()
            .find(|s| s.kind().is_tadda())
            .unwrap_or(ScoreSpec::new(ScoreKind::Tadda1L1, Some(ecfg.epsilon)).map_err(usage)?),
    };
    if candidates.len() < 2 {
        return Err(usage(anyhow!("at least two candidate windows required")));
    }
    let panel = load_panel(&a.panel, &cfg)?;
    let curve = evaluation::calibration_curve(&panel, &ecfg, &candidates, &objective).map_err(runtime)?;
    let best = curve
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("at least two candidates")
        .0;
    fs::create_dir_all(&cfg.out_dir).map_err(runtime)?;
    let mut text = String::from("window,objective\n");
    for (w, v) in &curve {
        text.push_str(&format!("{w},{v}\n"));
    }
    write_file(&cfg.out_dir, "calibration.csv", text.as_bytes())?;
    writeln!(out, "objective {objective} on months {}..={}", ecfg.calibration_period.start, ecfg.calibration_period.end)
        .map_err(runtime)?;
    for (w, v) in &curve {
        writeln!(out, "w={w:>3}  {v:.4}").map_err(runtime)?;
    }
    writeln!(out, "best window: {best}").map_err(runtime)
}
