//! Command-line front end.
//!
//! Bodies are JSON vertex lists (`{"vertices": [[x,y(,z)], ...]}`),
//! directional distributions either named presets (`axes2d`, `axes3d`,
//! `sigma2d:<order>`, `sigma3d:<order>`, `facets:<bodyfile>`) or JSON files.
//! All randomized subcommands are deterministic for a fixed `--seed`.
//!
//! Exit codes: 0 success, 64 usage/parse errors, 70 numeric failures;
//! `verify` additionally exits 2 when a check fails and 3 when one is
//! inconclusive.

mod config;
mod io;
mod run;

use clap::Parser;

use crate::run::CliError;

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NUMERIC: i32 = 70;
pub const EXIT_VERIFY_FAIL: i32 = 2;
pub const EXIT_VERIFY_INCONCLUSIVE: i32 = 3;

fn main() {
    let cli = match run::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not errors
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    std::process::exit(0);
                }
                _ => {
                    eprint!("{e}");
                    std::process::exit(EXIT_USAGE);
                }
            }
        }
    };
    match run::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(EXIT_USAGE);
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(EXIT_NUMERIC);
        }
    }
}
