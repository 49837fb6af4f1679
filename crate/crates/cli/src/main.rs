use clap::{Parser, Subcommand};
use cqv_cli::fixture::FixtureFile;
use cqv_cli::{digest, ops, paper};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cqv",
    about = "Spectral families, daseinisation and Stone spectra at desk scale"
)]
struct Cli {
    /// Numerical tolerance for property checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomised sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenpairs, two-parameter family table and family laws.
    Decompose { fixture: PathBuf, operator: String },
    /// Inner/outer daseinisation over a context poset or an abstract
    /// context.
    Daseinise {
        fixture: PathBuf,
        operator: String,
        context: String,
    },
    /// Observable/antonymous values per quasipoint with the cone
    /// theorem check.
    ObservableTable { fixture: PathBuf, operator: String },
    /// Flow sampling, group-law residuals and generator recovery.
    Stone {
        fixture: PathBuf,
        operator: String,
        #[arg(long, default_value_t = 0.1)]
        t0: f64,
        #[arg(long, default_value_t = 8)]
        steps: usize,
    },
    /// Interval-domain showcase.
    DomainDemo,
    /// The built-in worked example with golden tables.
    PaperExample,
}

fn load(path: &std::path::Path) -> Result<(FixtureFile, String), ops::CmdError> {
    let (fixture, bytes) = FixtureFile::load(path)?;
    Ok((fixture, digest(&bytes)))
}

fn run(cli: &Cli) -> Result<cqv_cli::report::Report, ops::CmdError> {
    match &cli.command {
        Command::Decompose { fixture, operator } => {
            let (f, d) = load(fixture)?;
            ops::cmd_decompose(&f, &d, operator, cli.tol)
        }
        Command::Daseinise {
            fixture,
            operator,
            context,
        } => {
            let (f, d) = load(fixture)?;
            ops::cmd_daseinise(&f, &d, operator, context, cli.tol)
        }
        Command::ObservableTable { fixture, operator } => {
            let (f, d) = load(fixture)?;
            ops::cmd_observable_table(&f, &d, operator, cli.tol)
        }
        Command::Stone {
            fixture,
            operator,
            t0,
            steps,
        } => {
            let (f, d) = load(fixture)?;
            ops::cmd_stone(&f, &d, operator, *t0, *steps, cli.tol)
        }
        Command::DomainDemo => ops::cmd_domain_demo(cli.seed, cli.tol),
        Command::PaperExample => Ok(paper::run_paper_example(cli.tol, None)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.render_json());
            } else {
                print!("{}", report.render_text());
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
