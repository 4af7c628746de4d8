//! Command-line front end for `wahl-core`: curve files, the built-in corpus,
//! subcommands with `key=value` reports, and the acceptance suite.

pub mod acceptance;
pub mod commands;
pub mod corpus;
pub mod curvefile;
pub mod error;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::{execute, Cli, Outcome};
pub use error::{exit, CliError, CliResult};

/// Parses `args`, runs the command and writes the report to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let _ = write!(out, "{}", outcome.report);
            outcome.exit
        }
        Err(e) => {
            let _ = writeln!(out, "command=error\nerror={}\nmessage={e}", e.kind());
            let _ = writeln!(err, "wahl: {e}");
            e.exit_code()
        }
    }
}
