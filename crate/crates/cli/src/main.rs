//! `mrt`: command-line front end for the reconnection-ordering library.
//!
//! Exit status is 0 on success, 1 when the library rejects the input (a
//! one-line JSON diagnostic goes to stderr) and 2 on usage errors.

mod args;
mod output;
mod run;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

#[derive(Debug)]
pub struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError {
            kind: "io",
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl<E: Into<mrt_core::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        let e = e.into();
        let kind = match &e {
            mrt_core::Error::Net(_) => "network",
            mrt_core::Error::Mssc(_) => "mssc",
            mrt_core::Error::Lp(_) => "lp",
            mrt_core::Error::Search(_) => "local-search",
            mrt_core::Error::Prep(_) => "prep",
            mrt_core::Error::Gen(_) => "gen",
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind, "message": e.message }));
            ExitCode::from(1)
        }
    }
}
