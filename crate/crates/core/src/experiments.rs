//! Experiment harness behind the `exksc` command line.
//!
//! Every command takes an [`ExperimentConfig`], computes its results in memory,
//! checks them, and writes a CSV (the primary artifact) plus a JSON summary
//! with the same stem. Episodes run on a rayon pool; each one seeds itself from
//! the base seed and its own coordinates, and rows are emitted in coordinate
//! order, so output does not depend on scheduling.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::{
    expansion_bounds, expansion_gain, expansion_pair, sample_component_joint, sample_scenario,
    ScenarioConstraint, ScenarioDims, ScenarioJoint,
};
use crate::channel::{make_bsc, ExplicitChannelSpec};
use crate::error::{Error, Result};
use crate::game::{
    analytic_ceiling, mean, run_episode, variance, CaseId, GameConfig, LearningParams, SrsaSeries,
};
use crate::prob::{channel_capacity, CapacityOptions};
use crate::real::Real;
use crate::rng::{coord_key, seed_key, substream, RNG_NAME};
use crate::svg;

pub const VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));

/// Monte Carlo slack used by the trend and bound checks.
pub const MC_TOLERANCE: f64 = 0.02;

/// Formats like C's `%g` with 6 significant digits.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        trim(&format!("{x:.*}", (5 - exp) as usize))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Verify,
    SweepBasic,
    SweepExplicit,
    SweepImplicit,
    ExkCases,
    Capacity,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::SweepBasic => "sweep-basic",
            Command::SweepExplicit => "sweep-explicit",
            Command::SweepImplicit => "sweep-implicit",
            Command::ExkCases => "exk-cases",
            Command::Capacity => "capacity",
        }
    }
}

/// `lo, lo + step, ..., hi`, rounded to 9 decimals.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n)
        .map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `M`
    pub signal_size: usize,
    /// `L`
    pub knowledge_size: usize,
    pub t_size: Option<usize>,
    /// Defaults per command: `0..0.5` step 0.05 (basic, capacity), `0..1`
    /// step 0.1 (explicit), `[0]` (implicit).
    pub eps1_grid: Option<Vec<f64>>,
    /// Defaults per command: `0..0.5` step 0.05 (basic), `[0]` (explicit),
    /// `0..1` step 0.1 (implicit).
    pub eps2_grid: Option<Vec<f64>>,
    pub alpha: f64,
    pub cases: Vec<CaseId>,
    pub rounds: usize,
    pub runs: usize,
    pub window: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub svg: bool,
    pub learning: LearningParams,
    pub trials: usize,
    pub sizes: Vec<usize>,
    pub tol: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            signal_size: 2,
            knowledge_size: 2,
            t_size: None,
            eps1_grid: None,
            eps2_grid: None,
            alpha: 0.5,
            cases: CaseId::ALL.to_vec(),
            rounds: 100_000,
            runs: 20,
            window: 1000,
            seed: 1,
            out: None,
            svg: false,
            learning: LearningParams::default(),
            trials: 1000,
            sizes: vec![2, 3],
            tol: 1e-10,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn eps1(&self, command: Command) -> Vec<f64> {
        self.eps1_grid.clone().unwrap_or_else(|| match command {
            Command::SweepExplicit => grid(0.0, 1.0, 0.1),
            Command::SweepImplicit => vec![0.0],
            _ => grid(0.0, 0.5, 0.05),
        })
    }

    pub fn eps2(&self, command: Command) -> Vec<f64> {
        self.eps2_grid.clone().unwrap_or_else(|| match command {
            Command::SweepExplicit => vec![0.0],
            Command::SweepImplicit => grid(0.0, 1.0, 0.1),
            _ => grid(0.0, 0.5, 0.05),
        })
    }

    pub fn out_path(&self, command: Command) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{}.csv", command.name())))
    }

    pub fn validate(&self, command: Command) -> Result<()> {
        let usage = |m: String| Err(Error::InvalidParameter(m));
        match command {
            Command::Verify => {
                if self.trials == 0 {
                    return usage("trials must be at least 1".into());
                }
                if self.sizes.is_empty() || self.sizes.iter().any(|&s| !(2..=3).contains(&s)) {
                    return usage("sizes must be a non-empty list drawn from {2, 3}".into());
                }
                if self.tol.is_nan() || self.tol <= 0.0 {
                    return usage("tol must be positive".into());
                }
            }
            Command::Capacity => {
                if self.eps1(command).is_empty() {
                    return usage("eps1 list is empty".into());
                }
            }
            _ => {
                if self.runs == 0 {
                    return usage("runs must be at least 1".into());
                }
                if self.window == 0 || self.rounds < self.window {
                    return usage(format!(
                        "rounds ({}) must be at least window ({}) > 0",
                        self.rounds, self.window
                    ));
                }
                if command == Command::ExkCases && self.cases.is_empty() {
                    return usage("case list is empty".into());
                }
                if command != Command::ExkCases
                    && (self.eps1(command).is_empty() || self.eps2(command).is_empty())
                {
                    return usage("grids must be non-empty".into());
                }
                self.learning.validate()?;
            }
        }
        for e in self.eps1(command).iter().chain(&self.eps2(command)) {
            if !(0.0..=1.0).contains(e) {
                return usage(format!("grid value {e} outside [0, 1]"));
            }
        }
        Ok(())
    }

    fn basic_game(&self, eps1: f64, eps2: f64) -> GameConfig {
        let mut g = GameConfig::basic(self.signal_size, self.knowledge_size, eps1, eps2);
        g.params.t_size = self.t_size;
        g.learning = self.learning;
        g.window = self.window;
        g
    }

    fn case_game(&self, case: CaseId) -> GameConfig {
        let mut g = GameConfig::case(self.signal_size, self.knowledge_size, case, self.alpha);
        g.params.t_size = self.t_size;
        g.learning = self.learning;
        g.window = self.window;
        g
    }
}

/// Named pass/fail outcome reported in the JSON summary.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

/// Result of a command: CSV body, summary, checks, and a human-readable report.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub command: Command,
    pub csv: String,
    pub summary: serde_json::Value,
    pub checks: Vec<Check>,
    pub report: String,
    pub svg: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Writes the CSV to `path` and the summary (and plot, when present) next
    /// to it.
    pub fn write(&self, path: &Path, config: &ExperimentConfig) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, &self.csv)?;
        let summary = json!({
            "command": self.command.name(),
            "version": VERSION,
            "rng": RNG_NAME,
            "config": config,
            "passed": self.passed(),
            "checks": self.checks,
            "results": self.summary,
        });
        let mut w = BufWriter::new(File::create(path.with_extension("json"))?);
        serde_json::to_writer_pretty(&mut w, &summary)?;
        writeln!(w)?;
        w.flush()?;
        if let Some(svg) = &self.svg {
            std::fs::write(path.with_extension("svg"), svg)?;
        }
        Ok(())
    }
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn run(command: Command, config: &ExperimentConfig) -> Result<Outcome> {
    config.validate(command)?;
    match command {
        Command::Verify => cmd_verify(config),
        Command::SweepBasic | Command::SweepExplicit | Command::SweepImplicit => {
            cmd_sweep(command, config)
        }
        Command::ExkCases => cmd_exk_cases(config),
        Command::Capacity => cmd_capacity(config),
    }
}

// ---------------------------------------------------------------- verify

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub size: usize,
    pub trials: usize,
    pub passed: usize,
    /// Largest deviation seen: identity residual, or bound violation.
    pub max_deviation: f64,
}

impl SuiteResult {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

pub const SUITES: [&str; 9] = [
    "decomposition",
    "noiseless_explicit",
    "noiseless_implicit_forms",
    "noiseless_implicit_lower",
    "noiseless_implicit_upper",
    "fully_noiseless",
    "fano",
    "expansion_gain",
    "expansion_bounds",
];

fn trial_seed(base: u64, suite: usize, size: usize, trial: usize) -> u64 {
    seed_key(base, &[0x5017E + suite as u64, size as u64, trial as u64])
}

/// One trial of `suite`: `(passed, deviation)`.
fn run_trial(suite: &str, size: usize, seed: u64, tol: f64) -> Result<(bool, f64)> {
    let dims = ScenarioDims {
        signal_size: size,
        knowledge_size: size,
    };
    let sample = |c| sample_scenario::<f64>(dims, seed, c);
    let identity = |d: f64| (d.abs() <= tol, d.abs());
    let bound = |excess: f64| (excess <= <f64 as Real>::INEQUALITY_SLACK, excess.max(0.0));
    Ok(match suite {
        "decomposition" => identity(sample(ScenarioConstraint::None)?.decompose()?.residual),
        "noiseless_explicit" => {
            let r = sample(ScenarioConstraint::ExplicitNoiseless)?.check_noiseless_explicit()?;
            let d = (r.mutual_information - r.predicted)
                .abs()
                .max(r.sender_cross.abs())
                .max(r.receiver_cross.abs());
            identity(d)
        }
        "noiseless_implicit_forms" => {
            let r = sample(ScenarioConstraint::ImplicitNoiseless)?.check_noiseless_implicit()?;
            identity(
                (r.mutual_information - r.sender_form)
                    .abs()
                    .max((r.mutual_information - r.receiver_form).abs()),
            )
        }
        "noiseless_implicit_lower" => {
            let r = sample(ScenarioConstraint::ImplicitNoiseless)?.check_noiseless_implicit()?;
            bound(r.signal - r.mutual_information)
        }
        "noiseless_implicit_upper" => {
            let r = sample(ScenarioConstraint::ImplicitNoiseless)?.check_noiseless_implicit()?;
            bound(r.mutual_information - r.signal - r.sender_knowledge_entropy)
        }
        "fully_noiseless" => {
            let r = sample(ScenarioConstraint::Both)?.check_fully_noiseless()?;
            identity(
                (r.mutual_information - r.type_entropy)
                    .abs()
                    .max((r.mutual_information - r.estimate_entropy).abs()),
            )
        }
        "fano" => fano_trial(&sample(ScenarioConstraint::None)?, seed)?,
        "expansion_gain" | "expansion_bounds" => {
            let joint = sample_component_joint::<f64>(size, size, seed)?;
            let mut rng = substream(seed, &[0xAB]);
            let (alpha, beta) = (rng.random::<f64>(), rng.random::<f64>());
            let pair = expansion_pair(&joint, alpha, beta, seed)?;
            if suite == "expansion_gain" {
                let g = expansion_gain(&pair.width1, &pair.width2)?;
                match g.predicted {
                    Some(p) => identity(g.gain - p),
                    None => (true, 0.0),
                }
            } else {
                let b = expansion_bounds(&pair.width2, size)?;
                bound((b.lower - b.mutual_information).max(b.mutual_information - b.upper))
            }
        }
        _ => unreachable!("suite index in range"),
    })
}

/// Exhaustive over all decoders when that is small, otherwise the MAP decoder
/// plus 64 random decoders.
fn fano_trial(sc: &ScenarioJoint<f64>, seed: u64) -> Result<(bool, f64)> {
    match sc.fano_exhaustive() {
        Ok(sweep) => Ok((
            sweep.violations == 0,
            (sweep.best_success - sweep.bound.unclamped).max(0.0),
        )),
        Err(Error::TooLarge { .. }) => {
            let mut rng = substream(seed, &[0xFA]);
            let map = sc.map_decoder();
            let inputs = map.len();
            let mut worst = f64::NEG_INFINITY;
            let mut ok = true;
            let mut decoders = vec![map];
            for _ in 0..64 {
                let mut d: Vec<usize> = (0..inputs)
                    .map(|_| rng.random_range(0..sc.t_size()))
                    .collect();
                d.shuffle(&mut rng);
                decoders.push(d);
            }
            for d in &decoders {
                let r = sc.check_fano(d)?;
                ok &= r.passed;
                worst = worst.max(r.success - r.bound.unclamped);
            }
            Ok((ok, worst.max(0.0)))
        }
        Err(e) => Err(e),
    }
}

pub fn verify_suites(config: &ExperimentConfig) -> Result<Vec<SuiteResult>> {
    let mut out = Vec::new();
    for (index, &suite) in SUITES.iter().enumerate() {
        for &size in &config.sizes {
            let results = (0..config.trials)
                .into_par_iter()
                .map(|t| {
                    run_trial(
                        suite,
                        size,
                        trial_seed(config.seed, index, size, t),
                        config.tol,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(SuiteResult {
                suite,
                size,
                trials: config.trials,
                passed: results.iter().filter(|r| r.0).count(),
                max_deviation: results.iter().map(|r| r.1).fold(0.0, f64::max),
            });
        }
    }
    Ok(out)
}

fn cmd_verify(config: &ExperimentConfig) -> Result<Outcome> {
    let suites = verify_suites(config)?;
    let csv = csv_string(
        &["suite", "size", "trials", "passed", "max_deviation"],
        suites.iter().map(|s| {
            vec![
                s.suite.into(),
                s.size.to_string(),
                s.trials.to_string(),
                s.passed.to_string(),
                fmt_g(s.max_deviation),
            ]
        }),
    )?;
    let checks = suites
        .iter()
        .map(|s| {
            Check::new(
                format!("{}/size{}", s.suite, s.size),
                s.all_passed(),
                format!(
                    "{}/{} max_deviation={}",
                    s.passed,
                    s.trials,
                    fmt_g(s.max_deviation)
                ),
            )
        })
        .collect();
    let report = String::new();
    Ok(Outcome {
        command: Command::Verify,
        csv,
        summary: json!({ "suites": suites }),
        checks,
        report,
        svg: None,
    })
}

// ---------------------------------------------------------------- sweeps

#[derive(Clone, Debug, Serialize)]
pub struct RunStats {
    pub run: usize,
    pub srsa_mean: f64,
    pub srsa_var: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub eps1: f64,
    pub eps2: f64,
    pub runs: Vec<RunStats>,
    /// Mean over runs of the stable-region SRSA.
    pub srsa_mean: f64,
    /// Across-run variance of the stable-region SRSA.
    pub srsa_var: f64,
    pub ceiling: f64,
    pub floor: f64,
}

pub fn sweep(config: &ExperimentConfig, eps1: &[f64], eps2: &[f64]) -> Result<Vec<SweepPoint>> {
    let mut coords: Vec<(f64, f64)> = eps1
        .iter()
        .flat_map(|&a| eps2.iter().map(move |&b| (a, b)))
        .collect();
    coords.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    coords.dedup();
    let tasks: Vec<(usize, usize)> = (0..coords.len())
        .flat_map(|p| (0..config.runs).map(move |r| (p, r)))
        .collect();
    let stats = tasks
        .par_iter()
        .map(|&(p, run)| {
            let (e1, e2) = coords[p];
            let seed = seed_key(config.seed, &[coord_key(e1), coord_key(e2), run as u64]);
            let s = run_episode(&config.basic_game(e1, e2), config.rounds, seed)?;
            Ok(RunStats {
                run,
                srsa_mean: s.stable_mean(),
                srsa_var: s.stable_window_variance(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    coords
        .iter()
        .enumerate()
        .map(|(p, &(e1, e2))| {
            let runs = stats[p * config.runs..(p + 1) * config.runs].to_vec();
            let means: Vec<f64> = runs.iter().map(|r| r.srsa_mean).collect();
            let game = config.basic_game(e1, e2);
            let t = game
                .params
                .t_size
                .unwrap_or_else(|| game.params.default_t_size());
            Ok(SweepPoint {
                eps1: e1,
                eps2: e2,
                srsa_mean: mean(&means),
                srsa_var: variance(&means),
                runs,
                ceiling: analytic_ceiling(&game)?,
                floor: 1.0 / t as f64,
            })
        })
        .collect()
}

fn find(points: &[SweepPoint], e1: f64, e2: f64) -> Option<&SweepPoint> {
    points
        .iter()
        .find(|p| (p.eps1 - e1).abs() < 1e-9 && (p.eps2 - e2).abs() < 1e-9)
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let (mx, my) = (mean(xs), mean(ys));
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// `ys` never rises by more than `tol` from one entry to the next.
pub fn nonincreasing_within(ys: &[f64], tol: f64) -> bool {
    ys.windows(2).all(|w| w[1] <= w[0] + tol)
}

fn bound_checks(points: &[SweepPoint]) -> Check {
    let bad: Vec<String> = points
        .iter()
        .filter(|p| p.srsa_mean > p.ceiling + MC_TOLERANCE || p.srsa_mean < p.floor - MC_TOLERANCE)
        .map(|p| {
            format!(
                "({}, {}): {} not in [{}, {}]",
                p.eps1,
                p.eps2,
                fmt_g(p.srsa_mean),
                fmt_g(p.floor),
                fmt_g(p.ceiling)
            )
        })
        .collect();
    Check::new(
        "srsa_within_analytic_bounds",
        bad.is_empty(),
        bad.join("; "),
    )
}

/// Ordering checks for the basic (two-channel) sweep.
pub fn basic_checks(points: &[SweepPoint]) -> Vec<Check> {
    let mut checks = vec![bound_checks(points)];
    if let Some(o) = find(points, 0.0, 0.0) {
        checks.push(Check::new(
            "origin_at_least_0.95",
            o.srsa_mean >= 0.95,
            fmt_g(o.srsa_mean),
        ));
        if let Some(c) = find(points, 0.5, 0.5) {
            checks.push(Check::new(
                "corner_below_origin_by_0.2",
                o.srsa_mean - c.srsa_mean >= 0.2,
                format!("{} vs {}", fmt_g(o.srsa_mean), fmt_g(c.srsa_mean)),
            ));
        }
    }
    let mut e1: Vec<f64> = points
        .iter()
        .map(|p| p.eps1)
        .filter(|&e| e <= 0.5 + 1e-12)
        .collect();
    let mut e2: Vec<f64> = points.iter().map(|p| p.eps2).collect();
    for v in [&mut e1, &mut e2] {
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        v.dedup();
    }
    let mut bad = Vec::new();
    for &b in &e2 {
        let row: Vec<f64> = e1
            .iter()
            .filter_map(|&a| find(points, a, b))
            .map(|p| p.srsa_mean)
            .collect();
        if !nonincreasing_within(&row, MC_TOLERANCE) {
            bad.push(format!("eps2={b} along eps1"));
        }
    }
    for &a in &e1 {
        let col: Vec<f64> = e2
            .iter()
            .filter_map(|&b| find(points, a, b))
            .map(|p| p.srsa_mean)
            .collect();
        if !nonincreasing_within(&col, MC_TOLERANCE) {
            bad.push(format!("eps1={a} along eps2"));
        }
    }
    checks.push(Check::new(
        "monotone_along_each_axis",
        bad.is_empty(),
        bad.join("; "),
    ));
    checks
}

/// Checks for the explicit-channel sweep (`eps2 = 0`).
pub fn explicit_checks(points: &[SweepPoint]) -> Vec<Check> {
    let mut checks = vec![bound_checks(points)];
    for end in [0.0, 1.0] {
        if let Some(p) = points.iter().find(|p| (p.eps1 - end).abs() < 1e-9) {
            checks.push(Check::new(
                format!("eps1_{end}_at_least_0.95"),
                p.srsa_mean >= 0.95,
                fmt_g(p.srsa_mean),
            ));
        }
    }
    if let Some(mid) = points.iter().find(|p| (p.eps1 - 0.5).abs() < 1e-9) {
        let min = points
            .iter()
            .map(|p| p.srsa_mean)
            .fold(f64::INFINITY, f64::min);
        checks.push(Check::new(
            "minimum_at_eps1_0.5",
            mid.srsa_mean <= min,
            format!("{} vs min {}", fmt_g(mid.srsa_mean), fmt_g(min)),
        ));
        if let Some(zero) = points.iter().find(|p| p.eps1.abs() < 1e-9) {
            checks.push(Check::new(
                "variance_at_0.5_exceeds_variance_at_0",
                mid.srsa_var > zero.srsa_var,
                format!("{} vs {}", fmt_g(mid.srsa_var), fmt_g(zero.srsa_var)),
            ));
        }
    }
    checks
}

/// Checks for the implicit-channel sweep (`eps1 = 0`).
pub fn implicit_checks(points: &[SweepPoint]) -> Vec<Check> {
    let mut checks = vec![bound_checks(points)];
    let means: Vec<f64> = points.iter().map(|p| p.srsa_mean).collect();
    checks.push(Check::new(
        "nonincreasing_in_eps2",
        nonincreasing_within(&means, MC_TOLERANCE),
        String::new(),
    ));
    if let Some(p) = points.iter().find(|p| p.eps2.abs() < 1e-9) {
        checks.push(Check::new(
            "eps2_0_at_least_0.95",
            p.srsa_mean >= 0.95,
            fmt_g(p.srsa_mean),
        ));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.eps2).collect();
    let vs: Vec<f64> = points.iter().map(|p| p.srsa_var).collect();
    let s = slope(&xs, &vs);
    checks.push(Check::new(
        "variance_trend_nondecreasing",
        s >= 0.0,
        format!("slope {}", fmt_g(s)),
    ));
    checks
}

fn cmd_sweep(command: Command, config: &ExperimentConfig) -> Result<Outcome> {
    let (eps1, eps2) = (config.eps1(command), config.eps2(command));
    let points = sweep(config, &eps1, &eps2)?;
    let mut rows = Vec::new();
    for p in &points {
        for r in &p.runs {
            rows.push(vec![
                fmt_g(p.eps1),
                fmt_g(p.eps2),
                r.run.to_string(),
                fmt_g(r.srsa_mean),
                fmt_g(r.srsa_var),
            ]);
        }
        rows.push(vec![
            fmt_g(p.eps1),
            fmt_g(p.eps2),
            "all".into(),
            fmt_g(p.srsa_mean),
            fmt_g(p.srsa_var),
        ]);
    }
    let csv = csv_string(&["eps1", "eps2", "run", "srsa_mean", "srsa_var"], rows)?;
    let checks = match command {
        Command::SweepBasic => basic_checks(&points),
        Command::SweepExplicit => explicit_checks(&points),
        _ => implicit_checks(&points),
    };
    let mut report = String::new();
    for p in &points {
        report.push_str(&format!(
            "eps1={:<6} eps2={:<6} mean={:<9} var={:<11} ceiling={}\n",
            fmt_g(p.eps1),
            fmt_g(p.eps2),
            fmt_g(p.srsa_mean),
            fmt_g(p.srsa_var),
            fmt_g(p.ceiling)
        ));
    }
    let aggregates: Vec<_> = points
        .iter()
        .map(|p| json!({ "eps1": p.eps1, "eps2": p.eps2, "srsa_mean": p.srsa_mean, "srsa_var": p.srsa_var, "ceiling": p.ceiling }))
        .collect();
    let svg = config
        .svg
        .then(|| sweep_svg(command, &points, &eps1, &eps2));
    Ok(Outcome {
        command,
        csv,
        summary: json!({ "points": aggregates }),
        checks,
        report,
        svg,
    })
}

fn sweep_svg(command: Command, points: &[SweepPoint], eps1: &[f64], eps2: &[f64]) -> String {
    match command {
        Command::SweepBasic => {
            let mut xs = eps1.to_vec();
            let mut ys = eps2.to_vec();
            for v in [&mut xs, &mut ys] {
                v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
                v.dedup();
            }
            let values: Vec<Vec<f64>> = xs
                .iter()
                .map(|&a| {
                    ys.iter()
                        .map(|&b| find(points, a, b).map_or(f64::NAN, |p| p.srsa_mean))
                        .collect()
                })
                .collect();
            svg::heatmap("SRSA", "eps1", "eps2", &xs, &ys, &values)
        }
        _ => {
            let x = |p: &SweepPoint| {
                if command == Command::SweepExplicit {
                    p.eps1
                } else {
                    p.eps2
                }
            };
            let label = if command == Command::SweepExplicit {
                "eps1"
            } else {
                "eps2"
            };
            let series = [
                svg::Series {
                    name: "mean",
                    points: points.iter().map(|p| (x(p), p.srsa_mean)).collect(),
                },
                svg::Series {
                    name: "ceiling",
                    points: points.iter().map(|p| (x(p), p.ceiling)).collect(),
                },
            ];
            svg::line_plot("SRSA", label, "stable-region SRSA", &series)
        }
    }
}

// ---------------------------------------------------------------- cases

#[derive(Clone, Debug, Serialize)]
pub struct CaseCurve {
    pub case: CaseId,
    /// Round at the end of each window.
    pub rounds: Vec<usize>,
    /// Mean over runs of each window's SRSA.
    pub mean: Vec<f64>,
    /// Across-run variance of each window's SRSA.
    pub variance: Vec<f64>,
    /// Mean over runs of the stable-region SRSA.
    pub stable_mean: f64,
    pub stable_var: f64,
    pub ceiling: f64,
}

pub fn case_curves(config: &ExperimentConfig) -> Result<Vec<CaseCurve>> {
    let mut cases = config.cases.clone();
    cases.sort();
    cases.dedup();
    let tasks: Vec<(usize, usize)> = (0..cases.len())
        .flat_map(|c| (0..config.runs).map(move |r| (c, r)))
        .collect();
    let series = tasks
        .par_iter()
        .map(|&(c, run)| {
            let seed = seed_key(config.seed, &[0xCA5E + cases[c] as u64, run as u64]);
            run_episode(&config.case_game(cases[c]), config.rounds, seed)
        })
        .collect::<Result<Vec<SrsaSeries>>>()?;
    cases
        .iter()
        .enumerate()
        .map(|(c, &case)| {
            let runs = &series[c * config.runs..(c + 1) * config.runs];
            let per_run: Vec<Vec<f64>> = runs.iter().map(SrsaSeries::window_means).collect();
            let windows = per_run[0].len();
            let column = |w: usize| per_run.iter().map(|r| r[w]).collect::<Vec<f64>>();
            let stable: Vec<f64> = runs.iter().map(SrsaSeries::stable_mean).collect();
            Ok(CaseCurve {
                case,
                rounds: (1..=windows).map(|w| w * config.window).collect(),
                mean: (0..windows).map(|w| mean(&column(w))).collect(),
                variance: (0..windows).map(|w| variance(&column(w))).collect(),
                stable_mean: mean(&stable),
                stable_var: variance(&stable),
                ceiling: analytic_ceiling(&config.case_game(case))?,
            })
        })
        .collect()
}

pub fn case_checks(curves: &[CaseCurve]) -> Vec<Check> {
    let get = |c: CaseId| curves.iter().find(|k| k.case == c);
    let mut checks = Vec::new();
    let bad: Vec<String> = curves
        .iter()
        .filter(|k| k.stable_mean > k.ceiling + MC_TOLERANCE)
        .map(|k| {
            format!(
                "case {}: {} > {}",
                k.case,
                fmt_g(k.stable_mean),
                fmt_g(k.ceiling)
            )
        })
        .collect();
    checks.push(Check::new(
        "each_case_within_ceiling",
        bad.is_empty(),
        bad.join("; "),
    ));
    if let Some(one) = get(CaseId::I) {
        checks.push(Check::new(
            "case_I_at_least_0.95",
            one.stable_mean >= 0.95,
            fmt_g(one.stable_mean),
        ));
        let half = one.variance.len() / 2;
        let xs: Vec<f64> = one.rounds[half..].iter().map(|&r| r as f64).collect();
        let s = slope(&xs, &one.variance[half..]);
        checks.push(Check::new(
            "case_I_variance_decreasing_last_half",
            s < 0.0,
            format!("slope {}", fmt_g(s)),
        ));
    }
    if let (Some(a), Some(b), Some(c), Some(d)) = (
        get(CaseId::I),
        get(CaseId::IV),
        get(CaseId::II),
        get(CaseId::III),
    ) {
        let ok = a.stable_mean > b.stable_mean
            && b.stable_mean > c.stable_mean
            && c.stable_mean > d.stable_mean;
        checks.push(Check::new(
            "order_I_IV_II_III",
            ok,
            format!(
                "I={} IV={} II={} III={}",
                fmt_g(a.stable_mean),
                fmt_g(b.stable_mean),
                fmt_g(c.stable_mean),
                fmt_g(d.stable_mean)
            ),
        ));
    }
    checks
}

fn cmd_exk_cases(config: &ExperimentConfig) -> Result<Outcome> {
    let curves = case_curves(config)?;
    let rows = curves.iter().flat_map(|k| {
        (0..k.rounds.len()).map(move |w| {
            vec![
                k.case.to_string(),
                k.rounds[w].to_string(),
                fmt_g(k.mean[w]),
                fmt_g(k.variance[w]),
            ]
        })
    });
    let csv = csv_string(&["case", "round", "mean", "variance"], rows)?;
    let checks = case_checks(&curves);
    let mut report = String::new();
    for k in &curves {
        report.push_str(&format!(
            "case {:<3} stable_mean={:<9} stable_var={:<11} ceiling={}\n",
            k.case.to_string(),
            fmt_g(k.stable_mean),
            fmt_g(k.stable_var),
            fmt_g(k.ceiling)
        ));
    }
    let summary: Vec<_> = curves
        .iter()
        .map(|k| json!({ "case": k.case, "stable_mean": k.stable_mean, "stable_var": k.stable_var, "ceiling": k.ceiling }))
        .collect();
    let svg = config.svg.then(|| {
        let names: Vec<String> = curves.iter().map(|k| format!("case {}", k.case)).collect();
        let series: Vec<svg::Series> = curves
            .iter()
            .zip(&names)
            .map(|(k, n)| svg::Series {
                name: n,
                points: k
                    .rounds
                    .iter()
                    .zip(&k.mean)
                    .map(|(&r, &m)| (r as f64, m))
                    .collect(),
            })
            .collect();
        svg::line_plot("SRSA by case", "round", "windowed SRSA", &series)
    });
    Ok(Outcome {
        command: Command::ExkCases,
        csv,
        summary: json!({ "cases": summary }),
        checks,
        report,
        svg,
    })
}

// ---------------------------------------------------------------- capacity

pub fn capacities(eps1: &[f64]) -> Result<Vec<(f64, f64)>> {
    let opts = CapacityOptions::default();
    eps1.iter()
        .map(|&e| {
            let ch = make_bsc::<f64>(ExplicitChannelSpec::new(e)?);
            Ok((e, channel_capacity(&ch, opts.tol, opts.max_iter)?))
        })
        .collect()
}

fn cmd_capacity(config: &ExperimentConfig) -> Result<Outcome> {
    let caps = capacities(&config.eps1(Command::Capacity))?;
    let csv = csv_string(
        &["eps1", "capacity"],
        caps.iter().map(|&(e, c)| vec![fmt_g(e), fmt_g(c)]),
    )?;
    let report = caps
        .iter()
        .map(|&(e, c)| format!("eps1={:<8} capacity={}\n", fmt_g(e), fmt_g(c)))
        .collect();
    let summary = json!({ "capacities": caps.iter().map(|&(e, c)| json!({ "eps1": e, "capacity": c })).collect::<Vec<_>>() });
    Ok(Outcome {
        command: Command::Capacity,
        csv,
        summary,
        checks: Vec::new(),
        report,
        svg: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (0.123456789, "0.123457"),
            (123456.7, "123457"),
            (1234567.0, "1.23457e+06"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (-2.5, "-2.5"),
            (0.9999995, "1"),
            (1e-300, "1e-300"),
            (0.05, "0.05"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g(x), want, "{x}");
        }
    }

    #[test]
    fn grids() {
        assert_eq!(grid(0.0, 0.5, 0.05).len(), 11);
        assert_eq!(grid(0.0, 0.5, 0.05)[3], 0.15);
        assert_eq!(grid(0.0, 1.0, 0.1)[7], 0.7);
    }

    #[test]
    fn config_round_trip_and_validation() {
        let c = ExperimentConfig::default();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), c);
        let partial: ExperimentConfig = serde_json::from_str(r#"{"runs": 3}"#).unwrap();
        assert_eq!(partial.runs, 3);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"bogus": 1}"#).is_err());
        let bad = ExperimentConfig {
            trials: 0,
            ..c.clone()
        };
        assert!(bad.validate(Command::Verify).is_err());
        let bad = ExperimentConfig { rounds: 10, ..c };
        assert!(bad.validate(Command::SweepBasic).is_err());
    }

    #[test]
    fn trend_helpers() {
        assert!(nonincreasing_within(&[1.0, 0.99, 1.005, 0.5], 0.02));
        assert!(!nonincreasing_within(&[0.5, 0.6], 0.02));
        assert!((slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn capacity_command_preserves_order() {
        let cfg = ExperimentConfig {
            eps1_grid: Some(vec![0.5, 0.0, 0.11]),
            ..Default::default()
        };
        let out = run(Command::Capacity, &cfg).unwrap();
        let lines: Vec<&str> = out.csv.lines().collect();
        assert_eq!(lines[0], "eps1,capacity");
        assert!(lines[1].starts_with("0.5,"));
        assert_eq!(lines[2], "0,1");
        assert!(lines[3].starts_with("0.11,0.5"));
    }
}
