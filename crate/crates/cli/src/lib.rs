//! Command-line front end: `elab <march|approx|limit|sweep|oracle> [flags]`.

pub mod args;
pub mod run;

use std::io::Write;

pub use args::{parse_args, Command, Format, RunConfig, UsageError};
pub use run::{run, RunError};

/// Parses `argv` (without the program name), runs it, and returns the exit status.
///
/// Reports go to `stdout` (or `--output`); diagnostics go to `stderr` only.
pub fn main_with<S: AsRef<str>>(argv: &[S], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let config = match parse_args(argv) {
        Ok(config) => config,
        Err(UsageError::Info(text)) => {
            let _ = write!(stdout, "{text}");
            return 0;
        }
        Err(UsageError::Invalid(message)) => {
            let _ = writeln!(stderr, "error: {message}");
            return 1;
        }
    };
    match run(&config, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
