use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use heisconvex_cli::{run, run_file, CliError, Command, Format, Overrides, RunOutput, Scenario};

#[derive(Parser)]
#[command(
    name = "heisconvex",
    version,
    about = "Convex analysis experiments on the Heisenberg group"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// RNG seed for every sampled check.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for the report file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutFormat>,
    /// Tolerance override such as `conv_tol=1e-8`; repeatable.
    #[arg(long = "tol", global = true, value_name = "K=V")]
    tol: Vec<String>,
}

#[derive(Subcommand)]
enum Sub {
    /// Run a scenario file.
    Run { scenario: PathBuf },
    /// Linear operators of the first worked example: monotonicity, potentials, cyclicity.
    Example1,
    /// Gauge resolvent collisions of the second worked example.
    Example2,
    /// Group-law property suites.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        seed: cli.seed,
        tol: cli.tol,
        format: cli.format.map(|f| match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }),
        out_dir: cli.out,
    };
    let result = match cli.command {
        Sub::Run { scenario } => run_file(&scenario, &overrides),
        Sub::Example1 => Scenario::builtin(Command::ReproduceExample1).and_then(|s| run(s, &overrides)),
        Sub::Example2 => Scenario::builtin(Command::ReproduceExample2).and_then(|s| run(s, &overrides)),
        Sub::Selftest => Scenario::builtin(Command::GroupSelftest).and_then(|s| run(s, &overrides)),
    };
    match result {
        Ok(out) => finish(&out),
        Err(e) => fail(&e),
    }
}

fn finish(out: &RunOutput) -> ExitCode {
    match &out.written_to {
        Some(p) => println!(
            "{}: {:?}, report written to {}",
            out.report.scenario.command.name(),
            out.report.status,
            p.display()
        ),
        None => print!("{}", out.rendered),
    }
    ExitCode::from(out.exit_code())
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("heisconvex: {e}");
    ExitCode::from(e.exit_code())
}
