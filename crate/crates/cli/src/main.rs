use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kwlab::config::parse_config;
use kwlab::report::{run_suite, Command, SuiteOutput};

#[derive(Parser)]
#[command(name = "kwlab", version, about = "Numerical laboratory for translation-invariant Kapustin-Witten solutions")]
struct Cli {
    #[command(subcommand)]
    command: Verb,
    /// Configuration file of `section.key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one configuration key; repeatable, later values win.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Directory for the report and CSV artifacts.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed for every random initial guess.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Subcommand)]
enum Verb {
    /// Evaluate the configured family at one point.
    ModelEval,
    /// Tabulate the model profiles against rho.
    ModelTable,
    /// Residual refinement study on the configured family.
    Residual,
    /// Decomposition identities on synthetic and imposter fields.
    Identity,
    /// Truncated constraint flux against radius.
    Flux,
    /// Uniqueness or comparison experiment for the w equation.
    SolveW,
    /// Integrate the Riccati equation.
    Ode,
    /// Small-t profiles and scaling exponents.
    Asym,
    /// Every study except the model listings.
    Report,
}

impl Verb {
    fn command(self) -> Command {
        match self {
            Verb::ModelEval => Command::ModelEval,
            Verb::ModelTable => Command::ModelTable,
            Verb::Residual => Command::Residual,
            Verb::Identity => Command::Identity,
            Verb::Flux => Command::Flux,
            Verb::SolveW => Command::SolveW,
            Verb::Ode => Command::Ode,
            Verb::Asym => Command::Asym,
            Verb::Report => Command::Report,
        }
    }
}

fn write_outputs(dir: &Path, out: &SuiteOutput, json: bool) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let name = if json { "report.json" } else { "report.csv" };
    std::fs::write(dir.join(name), out.report.render(json))?;
    for a in &out.artifacts {
        std::fs::write(dir.join(&a.name), &a.contents)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut overrides = cli.set.clone();
    if let Some(seed) = cli.seed {
        overrides.push(format!("run.seed={seed}"));
    }
    if let Some(f) = cli.format {
        let v = match f {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        overrides.push(format!("run.format={v}"));
    }
    let cfg = match parse_config(cli.config.as_deref(), &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("kwlab: {e}");
            return ExitCode::from(2);
        }
    };
    let out = run_suite(&cfg, cli.command.command());
    let json = cfg.json();
    print!("{}", out.report.render(json));
    if let Some(dir) = &cli.out {
        if let Err(e) = write_outputs(dir, &out, json) {
            eprintln!("kwlab: cannot write to {}: {e}", dir.display());
            return ExitCode::from(2);
        }
    }
    if out.report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
