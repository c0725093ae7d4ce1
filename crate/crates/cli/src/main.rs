use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use deligne_cli::{exit_code, run_file, CliError, Report, RunOptions, EXIT_ERROR};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Run one scenario file and write its report.
#[derive(Debug, Parser)]
#[command(name = "deligne", version, about)]
struct Args {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Report destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Override the scenario tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Attach wall-clock timings to the report.
    #[arg(long)]
    timings: bool,
}

fn emit(args: &Args, report: &Report) -> Result<(), CliError> {
    let body = match args.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    match &args.out {
        None => print!("{body}"),
        Some(path) => {
            std::fs::write(path, body)?;
            // Suites also leave a CSV summary next to the JSON report.
            if report.task == "suite" && args.format == Format::Json {
                std::fs::write(path.with_extension("csv"), report.to_csv()?)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // Usage errors share the exit code of bad scenarios; 2 is reserved for failed checks.
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_ERROR as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    }
    let opts = RunOptions { tolerance: args.tolerance, seed: args.seed, timings: args.timings };
    let result = run_file(&args.scenario, &opts);
    let code = exit_code(&result);
    match result {
        Ok(report) => {
            if let Err(e) = emit(&args, &report) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_ERROR as u8);
            }
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAIL {}", c.name);
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(code as u8)
}
