use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use exksc::experiments::{run, Command, ExperimentConfig, VERSION};
use exksc::game::CaseId;

#[derive(Parser)]
#[command(name = "exksc", version = VERSION, about = "Semantic communication experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the information identities and bounds on random scenarios.
    Verify(Shared),
    /// SRSA over the eps1 x eps2 grid.
    SweepBasic(Shared),
    /// SRSA against the explicit channel error (eps2 = 0).
    SweepExplicit(Shared),
    /// SRSA against the implicit channel error (eps1 = 0).
    SweepImplicit(Shared),
    /// Learning curves of the four knowledge-collision cases.
    ExkCases(Shared),
    /// Capacity of the binary symmetric channel for each eps1.
    Capacity(Shared),
}

#[derive(Args)]
struct Shared {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output path; the JSON summary and plot use the same stem.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    /// Also render an SVG plot.
    #[arg(long)]
    svg: bool,
    /// Print the effective config as JSON and exit.
    #[arg(long)]
    print_config: bool,
    /// Comma-separated eps1 grid.
    #[arg(long, value_delimiter = ',')]
    eps1: Option<Vec<f64>>,
    /// Comma-separated eps2 grid.
    #[arg(long, value_delimiter = ',')]
    eps2: Option<Vec<f64>>,
    /// Comma-separated case list (I, II, III, IV).
    #[arg(long, value_delimiter = ',')]
    cases: Option<Vec<CaseId>>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated alphabet sizes for `verify`.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    tol: Option<f64>,
}

impl Shared {
    fn config(self) -> Result<(ExperimentConfig, bool), String> {
        let mut c = match &self.config {
            Some(p) => {
                ExperimentConfig::from_json_file(p).map_err(|e| format!("{}: {e}", p.display()))?
            }
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => { $( if let Some(v) = self.$field { c.$field = v; } )* };
        }
        set!(seed, runs, rounds, window, alpha, trials, sizes, tol, cases);
        if self.out.is_some() {
            c.out = self.out;
        }
        if self.eps1.is_some() {
            c.eps1_grid = self.eps1;
        }
        if self.eps2.is_some() {
            c.eps2_grid = self.eps2;
        }
        c.svg |= self.svg;
        Ok((c, self.print_config))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, shared) = match cli.command {
        Cmd::Verify(s) => (Command::Verify, s),
        Cmd::SweepBasic(s) => (Command::SweepBasic, s),
        Cmd::SweepExplicit(s) => (Command::SweepExplicit, s),
        Cmd::SweepImplicit(s) => (Command::SweepImplicit, s),
        Cmd::ExkCases(s) => (Command::ExkCases, s),
        Cmd::Capacity(s) => (Command::Capacity, s),
    };
    let (config, print_config) = match shared.config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if print_config {
        println!(
            "{}",
            serde_json::to_string_pretty(&config).expect("config serializes")
        );
        return ExitCode::SUCCESS;
    }
    if let Err(e) = config.validate(command) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let outcome = match run(command, &config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let path = config.out_path(command);
    if let Err(e) = outcome.write(&path, &config) {
        eprintln!("error: writing {}: {e}", path.display());
        return ExitCode::from(2);
    }
    print!("{}", outcome.report);
    for c in &outcome.checks {
        println!(
            "{} {} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
