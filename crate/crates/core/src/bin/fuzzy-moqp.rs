use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fuzzy_moqp::report::{emit_curves, render_summary, run_pipeline, SolveOptions, EXIT_ERROR};

#[derive(Parser)]
#[command(version, about = "Fuzzy efficient solutions of multi-objective quadratic programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print or write the JSON report.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random starting points per multistart.
        #[arg(long, default_value_t = 16)]
        starts: usize,
        /// Grid oracle points per axis.
        #[arg(long, default_value_t = 401)]
        grid: usize,
        /// Grid oracle zoom rounds.
        #[arg(long, default_value_t = 3)]
        refine: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write membership curves as CSV files into this directory.
        #[arg(long)]
        curves: Option<PathBuf>,
        /// Skip the local solvers and use the grid oracle alone.
        #[arg(long)]
        oracle_only: bool,
        #[arg(long, default_value_t = 1e-6)]
        tol_lambda: f64,
        /// Ray direction for constraint curves, e.g. `1,2`.
        #[arg(long, value_delimiter = ',')]
        slice: Option<Vec<f64>>,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
}

fn main() -> ExitCode {
    let Command::Solve { file, seed, starts, grid, refine, report, curves, oracle_only, tol_lambda, slice, timings } =
        Cli::parse().command;
    let options = SolveOptions { seed, starts, grid, refine, oracle_only, tol_lambda, slice, timings };
    let solved = match run_pipeline(&file, &options) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let json = solved.report.to_json();
    let written = match &report {
        Some(path) => std::fs::write(path, &json),
        None => {
            print!("{json}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_ERROR as u8);
    }
    if let Some(dir) = &curves {
        if let Err(e) = emit_curves(&solved.system, dir, options.slice.as_deref()) {
            eprintln!("error: cannot write curves: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    }
    eprint!("{}", render_summary(&solved.report));
    ExitCode::from(solved.report.exit_code() as u8)
}
