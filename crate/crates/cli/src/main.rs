mod args;
mod csvio;
mod report;
mod runner;

use args::{Cli, Command};
use clap::Parser;
use std::io::Write;
use std::path::{Path, PathBuf};

/// CLI failure modes, mapped onto the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: the input file does not exist.
    MissingInput(String),
    /// Exit 3: malformed CSV, unknown columns, or invalid flags.
    BadData(String),
    /// Exit 4: a sampler precondition was violated.
    Sampler(String),
}

impl CliError {
    fn sampler(e: ranklatent::Error) -> Self {
        CliError::Sampler(e.to_string())
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::MissingInput(_) => 2,
            CliError::BadData(_) => 3,
            CliError::Sampler(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::MissingInput(m) | CliError::BadData(m) | CliError::Sampler(m) => m,
        }
    }
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::BadData(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|()| stdout.write_all(b"\n"))
                .map_err(|e| CliError::BadData(format!("cannot write to stdout: {e}")))
        }
    }
}

/// The plot grid lands next to the JSON output: `out.json` -> `out.plot.csv`.
fn plot_grid_path(output: &Path) -> PathBuf {
    output.with_extension("plot.csv")
}

fn real_main() -> Result<(), CliError> {
    let cli = Cli::parse();
    match (cli.command, cli.test) {
        (Some(Command::Simulate(args)), _) => {
            let csv = runner::run_simulation(&args)?;
            write_output(args.output.as_ref(), &csv)
        }
        (None, Some(args)) => {
            if args.plot_grid && args.output.is_none() {
                return Err(CliError::BadData(
                    "--plot-grid needs --output so the grid CSV has somewhere to live".into(),
                ));
            }
            let out = runner::run_test(&args)?;
            write_output(args.output.as_ref(), &out.json)?;
            if let Some(grid) = out.plot_grid {
                let path = plot_grid_path(args.output.as_ref().expect("checked above"));
                std::fs::write(&path, grid).map_err(|e| {
                    CliError::BadData(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            Ok(())
        }
        (None, None) => Err(CliError::BadData(
            "nothing to do: pass --test with an --input, or use the simulate subcommand".into(),
        )),
    }
}

fn main() {
    if let Err(e) = real_main() {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
