//! `multiband`: robust linear programs under multi-band uncertainty from the
//! command line.
//!
//! Exit codes: 0 success, 1 the solver stopped without an optimum (limit,
//! infeasible or unbounded), 2 bad input, 3 internal consistency failure.

mod args;
mod commands;
mod fail;
mod output;

use args::{Cli, Command};
use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Reformulate(a) => commands::reformulate(a),
        Command::Solve(a) => commands::solve(a),
        Command::Separate(a) => commands::separate(a),
        Command::Generate(a) => commands::generate(a),
        Command::Calibrate(a) => commands::calibrate(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Compare(a) => commands::compare(a),
        Command::LpSolve => commands::lp_solve(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
