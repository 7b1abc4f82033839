mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, Common};
use pjlab::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PRECISION: u8 = 3;

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Moments { common, .. }
        | Command::Verify { common, .. }
        | Command::Asymptotics { common, .. }
        | Command::Density { common, .. } => common,
    }
}

fn dispatch(cmd: &Command) -> pjlab::Result<commands::Outcome> {
    match cmd {
        Command::Moments { common, k_max } => commands::moments(common, *k_max),
        Command::Verify {
            suite,
            common,
            n_max,
            n,
        } => commands::verify(common, *suite, *n_max, *n),
        Command::Asymptotics {
            kind,
            common,
            n_grid,
            order,
        } => commands::asymptotics(common, *kind, n_grid, *order),
        Command::Density { common, n, samples } => commands::density(common, n, *samples),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = common(&cli.command);
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.max(1))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match pool.install(|| dispatch(&cli.command)) {
        Ok(outcome) => {
            if let Err(e) = outcome.report.emit(opts.format, opts.out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::PrecisionExhausted { .. } => ExitCode::from(EXIT_PRECISION),
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}
