use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use elab_core::numerics::MAX_REFERENCE_DIGITS;
use elab_core::{Mode, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Euler march from x = 1 to x = 2, one row per step.
    March,
    /// Single approximant (1 + 1/n)^n.
    Approx,
    /// Approximants over a schedule of step sizes.
    Limit,
    /// Binary64 error across a grid of step sizes, with a convergence report.
    Sweep,
    /// Reference value of e from the factorial series.
    Oracle,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::March => "march",
            Command::Approx => "approx",
            Command::Limit => "limit",
            Command::Sweep => "sweep",
            Command::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

pub const DEFAULT_PRECISION: u32 = 20;
pub const DEFAULT_REF_DIGITS: u32 = 25;
pub const DEFAULT_LIMIT_SCHEDULE: &str = "pow10:1..8";
pub const DEFAULT_SWEEP_SCHEDULE: &str = "pow10:1..14";

#[derive(Debug, Parser)]
#[command(name = "elab", version, about = "Euler-march and compound-limit experiments on e")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Number of steps across [1, 2], i.e. 1/dx.
    #[arg(long)]
    n: Option<u64>,
    /// Significant digits of reported values.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Significant digits of the reference e used for errors.
    #[arg(long = "ref-digits", default_value_t = DEFAULT_REF_DIGITS)]
    ref_digits: u32,
    /// pow10:A..B, doubling:A..B or list:n1,n2,...
    #[arg(long)]
    schedule: Option<String>,
    /// exact, float-pow, float-multiply-loop or float-log-exp.
    #[arg(long, default_value = "exact")]
    mode: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Digits for the oracle command.
    #[arg(long)]
    digits: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub n: Option<u64>,
    pub precision: u32,
    pub ref_digits: u32,
    pub schedule: Option<Schedule>,
    pub mode: Mode,
    pub format: Format,
    pub output_path: Option<PathBuf>,
    pub digits: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UsageError {
    /// `--help` or `--version`; the text goes to standard output.
    Info(String),
    Invalid(String),
}

impl UsageError {
    pub fn message(&self) -> &str {
        match self {
            UsageError::Info(s) | UsageError::Invalid(s) => s,
        }
    }
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message())
    }
}

impl std::error::Error for UsageError {}

fn invalid(message: impl Into<String>) -> UsageError {
    UsageError::Invalid(message.into())
}

/// Parses arguments (without the program name) into a validated configuration.
pub fn parse_args<S: AsRef<str>>(argv: &[S]) -> Result<RunConfig, UsageError> {
    let args = std::iter::once("elab").chain(argv.iter().map(AsRef::as_ref));
    let cli = Cli::try_parse_from(args).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => UsageError::Info(e.to_string()),
            _ => UsageError::Invalid(e.to_string().trim_end().to_string()),
        }
    })?;
    let command = cli.command;
    let name = command.name();

    let mode: Mode = cli.mode.parse().map_err(|_| {
        invalid(format!(
            "--mode: unknown mode {:?} (expected exact, float-pow, float-multiply-loop or float-log-exp)",
            cli.mode
        ))
    })?;

    if cli.precision == 0 {
        return Err(invalid("--precision must be ≥ 1"));
    }
    if cli.ref_digits == 0 || cli.ref_digits > MAX_REFERENCE_DIGITS {
        return Err(invalid(format!("--ref-digits must lie in 1..={MAX_REFERENCE_DIGITS}")));
    }
    if cli.precision > cli.ref_digits {
        return Err(invalid(format!(
            "--precision ({}) must not exceed --ref-digits ({})",
            cli.precision, cli.ref_digits
        )));
    }

    let n = match (command, cli.n) {
        (Command::March | Command::Approx, None) => {
            return Err(invalid(format!("--n is required for {name}")))
        }
        (Command::March | Command::Approx, Some(0)) => return Err(invalid("n must be ≥ 1")),
        (Command::March | Command::Approx, Some(n)) => Some(n),
        (_, Some(_)) => return Err(invalid(format!("--n does not apply to {name}"))),
        (_, None) => None,
    };

    let schedule = match command {
        Command::Limit | Command::Sweep => {
            let default = if command == Command::Limit {
                DEFAULT_LIMIT_SCHEDULE
            } else {
                DEFAULT_SWEEP_SCHEDULE
            };
            let text = cli.schedule.as_deref().unwrap_or(default);
            Some(text.parse::<Schedule>().map_err(|e| invalid(format!("--schedule: {e}")))?)
        }
        _ if cli.schedule.is_some() => {
            return Err(invalid(format!("--schedule does not apply to {name}")))
        }
        _ => None,
    };

    let digits = match (command, cli.digits) {
        (Command::Oracle, None) => return Err(invalid("--digits is required for oracle")),
        (Command::Oracle, Some(d)) if d == 0 || d > MAX_REFERENCE_DIGITS => {
            return Err(invalid(format!("--digits must lie in 1..={MAX_REFERENCE_DIGITS}")))
        }
        (Command::Oracle, Some(d)) => Some(d),
        (_, Some(_)) => return Err(invalid("--digits applies to oracle only")),
        (_, None) => None,
    };

    if command == Command::March && mode != Mode::Exact {
        return Err(invalid("--mode: march runs in exact arithmetic only"));
    }

    Ok(RunConfig {
        command,
        n,
        precision: cli.precision,
        ref_digits: cli.ref_digits,
        schedule,
        mode,
        format: cli.format,
        output_path: cli.output,
        digits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use elab_core::ScheduleKind;

    fn err(args: &[&str]) -> String {
        match parse_args(args) {
            Err(UsageError::Invalid(m)) => m,
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn approx_defaults() {
        let cfg = parse_args(&["approx", "--n", "10"]).unwrap();
        assert_eq!(cfg.command, Command::Approx);
        assert_eq!(cfg.n, Some(10));
        assert_eq!(cfg.precision, 20);
        assert_eq!(cfg.ref_digits, 25);
        assert_eq!(cfg.mode, Mode::Exact);
        assert_eq!(cfg.format, Format::Table);
        assert_eq!(cfg.output_path, None);
    }

    #[test]
    fn limit_schedule_flag() {
        let cfg = parse_args(&["limit", "--schedule", "pow10:1..8"]).unwrap();
        let sched = cfg.schedule.unwrap();
        assert_eq!(sched.kind(), ScheduleKind::PowersOfTen);
        let ns: Vec<u64> = sched.entries().iter().map(|s| s.n()).collect();
        assert_eq!(ns, (1..=8).map(|k| 10u64.pow(k)).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_zero_steps() {
        assert_eq!(err(&["approx", "--n", "0"]), "n must be ≥ 1");
    }

    #[test]
    fn error_messages_name_the_flag() {
        assert!(err(&["approx", "--n", "ten"]).contains("--n"));
        assert!(err(&["approx", "--n", "10", "--bogus"]).contains("--bogus"));
        assert!(err(&["approx", "--n", "10", "--precision", "30"]).contains("--precision"));
        assert!(err(&["limit", "--schedule", "pow10:5..1"]).contains("--schedule"));
        assert!(err(&["approx", "--n", "10", "--mode", "fast"]).contains("--mode"));
        assert!(err(&["approx", "--n", "10", "--format", "xml"]).contains("--format"));
        assert!(err(&["oracle"]).contains("--digits"));
        assert!(err(&["approx"]).contains("--n"));
        assert!(err(&["approx", "--n", "10", "--digits", "5"]).contains("--digits"));
        assert!(err(&["march", "--n", "10", "--mode", "float-pow"]).contains("--mode"));
        assert!(err(&["frobnicate"]).contains("frobnicate"));
    }

    #[test]
    fn precision_may_equal_reference_digits() {
        let cfg = parse_args(&["approx", "--n", "10", "--precision", "40", "--ref-digits", "40"]).unwrap();
        assert_eq!(cfg.precision, 40);
    }

    #[test]
    fn help_is_informational() {
        assert!(matches!(parse_args(&["--help"]), Err(UsageError::Info(_))));
    }

    #[test]
    fn sweep_uses_decade_grid_by_default() {
        let cfg = parse_args(&["sweep"]).unwrap();
        assert_eq!(cfg.schedule.unwrap().entries().len(), 14);
    }
}
