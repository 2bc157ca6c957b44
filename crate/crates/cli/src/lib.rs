//! Scenario runner for `heisconvex`: JSON scenario in, CSV or JSON report out.
//!
//! Exit codes: 0 pass, 1 violations or witnesses found, 2 usage or schema error,
//! 3 solver non-convergence. Refutation demos (`collisions`, failing checks) are
//! expected to exit with 1.

pub mod commands;
pub mod report;
pub mod scenario;

use std::path::PathBuf;

pub use report::{Report, Status};
pub use scenario::{CliError, Command, Format, Scenario};

/// Command-line settings applied on top of the scenario file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    /// `key=value` tolerance overrides, applied in order.
    pub tol: Vec<String>,
    pub format: Option<Format>,
    /// Directory for the report; the file is named after the command.
    pub out_dir: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(&self, scenario: &mut Scenario) -> Result<(), CliError> {
        for kv in &self.tol {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--tol expects KEY=VALUE, got `{kv}`")))?;
            scenario
                .tolerances
                .set(k, v)
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
        if let Some(seed) = self.seed {
            scenario.tolerances.seed = seed;
        }
        if let Some(format) = self.format {
            scenario.output.format = format;
        }
        if let Some(dir) = &self.out_dir {
            let name = format!("{}.{}", scenario.command.name(), scenario.output.format.extension());
            scenario.output.path = Some(dir.join(name));
        }
        Ok(())
    }
}

/// The finished run: the report, its rendering and where it was written, if anywhere.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub rendered: String,
    pub written_to: Option<PathBuf>,
}

impl RunOutput {
    pub fn exit_code(&self) -> u8 {
        self.report.exit_code()
    }
}

pub fn run(mut scenario: Scenario, overrides: &Overrides) -> Result<RunOutput, CliError> {
    overrides.apply(&mut scenario)?;
    let format = scenario.output.format;
    let path = scenario.output.path.clone();
    let report = commands::execute(scenario)?;
    let rendered = report.render(format);
    if let Some(p) = &path {
        report::write_atomic(p, &rendered)?;
    }
    Ok(RunOutput {
        report,
        rendered,
        written_to: path,
    })
}

/// Reads, parses and runs a scenario file.
pub fn run_file(path: &std::path::Path, overrides: &Overrides) -> Result<RunOutput, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    run(Scenario::parse(&text)?, overrides)
}
