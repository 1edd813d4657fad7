use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rydeit::ddi::potential_curve;
use rydeit::scenario::{reproduce_paper, run, Experiment, RunOptions, RunOutput, Scenario};
use rydeit::Error;

#[derive(Parser)]
#[command(name = "rydeit", version, about = "Rydberg-EIT photon-photon interaction simulator")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Exit with status 2 when any constraint entry is violated (default).
    #[arg(long, global = true, conflicts_with = "warn")]
    strict: bool,
    /// Report violated constraint entries on stderr but exit 0.
    #[arg(long, global = true)]
    warn: bool,
    /// Directory for result tables and grid dumps.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Relative quadrature tolerance, overriding the scenario's.
    #[arg(long, global = true, value_name = "REL")]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run { file: PathBuf },
    /// Compare the bundled scenarios against the published operating point.
    ReproducePaper,
    /// Print the reduced 1D potential as two columns (zeta, Delta).
    Potential {
        #[arg(long, allow_hyphen_values = true)]
        zeta_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        zeta_max: f64,
        #[arg(long)]
        points: usize,
    },
    /// Run a scenario whose experiment is a sweep.
    Sweep { file: PathBuf },
}

const PARSE: u8 = 1;
const CONSTRAINT: u8 = 2;
const NON_CONVERGENCE: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ConstraintFailure { .. } => CONSTRAINT,
        Error::QuadratureNonConvergence { .. } => NON_CONVERGENCE,
        _ => PARSE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn execute(cli: &Cli) -> rydeit::Result<()> {
    let g = &cli.global;
    let options = RunOptions {
        quad_tol: g.tol,
        ..RunOptions::default()
    };
    let strict = !g.warn;
    match &cli.command {
        Command::Run { file } => {
            let scenario = Scenario::from_path(file)?;
            finish(&run(&scenario, &options)?, g.out.as_deref(), strict)
        }
        Command::Sweep { file } => {
            let scenario = Scenario::from_path(file)?;
            if !matches!(scenario.file.experiment, Experiment::Sweep { .. }) {
                return Err(Error::Parse(format!("{}: experiment.kind must be \"sweep\"", file.display())));
            }
            finish(&run(&scenario, &options)?, g.out.as_deref(), strict)
        }
        Command::ReproducePaper => {
            let cmp = reproduce_paper(&options)?;
            let table = cmp.to_table();
            emit(&table, g.out.as_deref(), "paper_comparison.csv")?;
            let failed = cmp.gate_failures + cmp.qnd_failures;
            enforce(failed, strict)
        }
        Command::Potential {
            zeta_min,
            zeta_max,
            points,
        } => {
            let curve = potential_curve(*zeta_min, *zeta_max, *points)?;
            let mut text = String::new();
            for (z, d) in curve {
                text.push_str(&format!("{} {}\n", rydeit::scenario::fmt_sig(z), rydeit::scenario::fmt_sig(d)));
            }
            emit(&text, g.out.as_deref(), "potential_curve.txt")
        }
    }
}

fn finish(output: &RunOutput, out: Option<&Path>, strict: bool) -> rydeit::Result<()> {
    emit(&output.render(), out, "results.csv")?;
    if let Some(dir) = out {
        for d in &output.dumps {
            write(&dir.join(&d.file_name), &d.contents)?;
        }
    }
    for v in output.report.violations() {
        eprintln!("constraint violated: {} (margin {})", v.name, rydeit::scenario::fmt_sig(v.margin));
    }
    enforce(output.constraint_failures, strict)
}

fn enforce(failed: usize, strict: bool) -> rydeit::Result<()> {
    if failed > 0 {
        if strict {
            return Err(Error::ConstraintFailure { failed });
        }
        eprintln!("warning: {failed} constraint entries violated");
    }
    Ok(())
}

/// Prints to stdout, or writes `name` under `out` when given.
fn emit(text: &str, out: Option<&Path>, name: &str) -> rydeit::Result<()> {
    match out {
        Some(dir) => write(&dir.join(name), text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write(path: &Path, text: &str) -> rydeit::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::Parse(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
