use std::fs::File;
use std::io::{self, BufWriter, Write};

use elab_core::analysis::decade_grid;
use elab_core::report::{
    csv_writer, ApproximationRow, OracleRow, ReportError, SweepRow, TrajectoryRow,
};
use elab_core::{
    compound_approx, euler_march_each, float_compound_approx, float_error_sweep, limit_schedule_with_mode,
    reference_e, Approximation, ConvergenceReport, FloatMode, Mode, PrecisionDecimal, RoundingPolicy,
    Schedule, ScheduleKind, StepSpec,
};
use serde::Serialize;

use crate::args::{Command, Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Precondition(String),
    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Precondition(_) => 1,
            RunError::Io(_) => 2,
        }
    }
}

impl From<elab_core::Error> for RunError {
    fn from(e: elab_core::Error) -> Self {
        RunError::Precondition(e.to_string())
    }
}

impl From<ReportError> for RunError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Io(io) => RunError::Io(io),
            other if other.is_io() => RunError::Io(io::Error::other(other.to_string())),
            other => RunError::Precondition(other.to_string()),
        }
    }
}

/// Computed output of a command, ready to be written in any format.
enum Report {
    March(StepSpec),
    Approximations(Vec<ApproximationRow>),
    Sweep(ConvergenceReport, usize),
    Oracle(OracleRow),
}

/// Runs a validated configuration, writing the report to `stdout` or `--output`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), RunError> {
    // Everything that can fail on preconditions happens before the output is opened.
    let report = build_report(config)?;
    match &config.output_path {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            write_report(config, &report, &mut out)?;
            out.flush()?;
        }
        None => {
            write_report(config, &report, stdout)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn build_report(config: &RunConfig) -> Result<Report, RunError> {
    let p = config.precision;
    match config.command {
        Command::March => Ok(Report::March(StepSpec::new(required_n(config)?)?)),
        Command::Approx => {
            let step = StepSpec::new(required_n(config)?)?;
            let approx = match config.mode {
                Mode::Exact => compound_approx(&step, p),
                Mode::Float(mode) => float_compound_approx(&step, mode)?,
            };
            let approx = approx.with_reference(&reference_e(config.ref_digits));
            Ok(Report::Approximations(vec![ApproximationRow::new(&approx, p)]))
        }
        Command::Limit => {
            let approxs = limit_schedule_with_mode(schedule(config)?, config.mode, p, config.ref_digits)?;
            Ok(Report::Approximations(
                approxs.iter().map(|a| ApproximationRow::new(a, p)).collect(),
            ))
        }
        Command::Sweep => {
            let sched = schedule(config)?;
            let mode = match config.mode {
                Mode::Exact => FloatMode::Pow,
                Mode::Float(mode) => mode,
            };
            let sweep = float_error_sweep(&sweep_grid(sched), mode)?;
            let exact: Vec<Approximation> = limit_schedule_with_mode(sched, Mode::Exact, p, config.ref_digits)?;
            let minimum = sweep
                .points
                .iter()
                .position(|pt| pt == sweep.minimum())
                .expect("minimum is one of the points");
            Ok(Report::Sweep(ConvergenceReport::from_approximations(&exact, Some(&sweep))?, minimum))
        }
        Command::Oracle => {
            let digits = config
                .digits
                .ok_or_else(|| RunError::Precondition("--digits is required for oracle".into()))?;
            Ok(Report::Oracle(OracleRow {
                digits,
                value: reference_e(digits).to_significant_string(digits),
            }))
        }
    }
}

fn required_n(config: &RunConfig) -> Result<u64, RunError> {
    config
        .n
        .ok_or_else(|| RunError::Precondition("--n is required".into()))
}

fn schedule(config: &RunConfig) -> Result<&Schedule, RunError> {
    config
        .schedule
        .as_ref()
        .ok_or_else(|| RunError::Precondition("--schedule is required".into()))
}

/// Step sizes `dx = 1/n` for the schedule entries; powers of ten use the binary64
/// nearest `10^-k` rather than a computed reciprocal.
fn sweep_grid(sched: &Schedule) -> Vec<f64> {
    match sched.kind() {
        ScheduleKind::PowersOfTen => {
            let ks: Vec<u32> = sched.entries().iter().map(|s| s.n().ilog10()).collect();
            decade_grid(ks[0], *ks.last().unwrap())
        }
        _ => sched.entries().iter().map(|s| 1.0 / s.n() as f64).collect(),
    }
}

fn write_report(config: &RunConfig, report: &Report, out: &mut dyn Write) -> Result<(), RunError> {
    match report {
        Report::March(step) => write_march(config, step, out),
        Report::Approximations(rows) => match config.format {
            Format::Csv => write_csv_rows(rows, out),
            Format::Json => write_json_rows(rows, out),
            Format::Table => {
                let body = rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.n.to_string(),
                            r.dx.to_string(),
                            r.mode.clone(),
                            r.value.to_string(),
                            r.value.to_significant_string(3),
                            r.abs_error.as_ref().map(short_error).unwrap_or_default(),
                        ]
                    })
                    .collect::<Vec<_>>();
                write_table(out, &["n", "dx", "mode", "value", "sig3", "abs_error"], &body)?;
                Ok(())
            }
        },
        Report::Sweep(report, minimum) => match config.format {
            Format::Csv => write_csv_rows(&report.sweep, out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, report).map_err(ReportError::from)?;
                out.write_all(b"\n")?;
                Ok(())
            }
            Format::Table => write_sweep_table(report, *minimum, out),
        },
        Report::Oracle(row) => match config.format {
            Format::Csv => write_csv_rows(std::slice::from_ref(row), out),
            Format::Json => write_json_rows(std::slice::from_ref(row), out),
            Format::Table => {
                write_table(out, &["digits", "value"], &[vec![row.digits.to_string(), row.value.clone()]])?;
                Ok(())
            }
        },
    }
}

fn short_error(e: &PrecisionDecimal) -> String {
    e.round(6).to_string()
}

fn write_csv_rows<T: Serialize>(rows: &[T], out: &mut dyn Write) -> Result<(), RunError> {
    elab_core::report::write_csv(rows, out)?;
    Ok(())
}

/// `{"rows":[` then one compact object per line, then `]}`.
struct JsonRows<'a> {
    out: &'a mut dyn Write,
    first: bool,
}

impl<'a> JsonRows<'a> {
    fn begin(out: &'a mut dyn Write) -> io::Result<Self> {
        out.write_all(b"{\"rows\":[")?;
        Ok(Self { out, first: true })
    }

    fn push<T: Serialize>(&mut self, row: &T) -> Result<(), RunError> {
        self.out.write_all(if self.first { b"\n" } else { b",\n" })?;
        self.first = false;
        serde_json::to_writer(&mut *self.out, row).map_err(ReportError::from)?;
        Ok(())
    }

    fn end(self) -> io::Result<()> {
        self.out.write_all(b"\n]}\n")
    }
}

fn write_json_rows<T: Serialize>(rows: &[T], out: &mut dyn Write) -> Result<(), RunError> {
    let mut doc = JsonRows::begin(out)?;
    for row in rows {
        doc.push(row)?;
    }
    doc.end()?;
    Ok(())
}

fn write_table_row(out: &mut dyn Write, cells: &[String], widths: &[usize]) -> io::Result<()> {
    let mut line = String::new();
    for (i, (cell, width)) in cells.iter().zip(widths).enumerate() {
        if i + 1 == cells.len() {
            line.push_str(cell);
        } else {
            line.push_str(&format!("{cell:<width$}  "));
        }
    }
    writeln!(out, "{}", line.trim_end())
}

fn write_table(out: &mut dyn Write, headers: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let header: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    write_table_row(out, &header, &widths)?;
    for row in rows {
        write_table_row(out, row, &widths)?;
    }
    Ok(())
}

/// Streams the march so that memory stays flat for large `n`.
fn write_march(config: &RunConfig, step: &StepSpec, out: &mut dyn Write) -> Result<(), RunError> {
    let p = config.precision;
    let working = RoundingPolicy::for_exponent(step.n()).working_precision(p);
    let row = |k: u64, value: &PrecisionDecimal| {
        // The march starts from f(1) = 1, so the ratio is the value itself.
        let value = value.round(p);
        TrajectoryRow {
            k,
            x: step.x_at(k, p),
            ratio: value.clone(),
            value,
        }
    };
    let mut failure: Option<RunError> = None;
    match config.format {
        Format::Csv => {
            let mut writer = csv_writer(&mut *out);
            euler_march_each(&PrecisionDecimal::one(), step, working, |k, v| {
                if failure.is_none() {
                    if let Err(e) = writer.serialize(row(k, v)) {
                        failure = Some(ReportError::from(e).into());
                    }
                }
            });
            if failure.is_none() {
                writer.flush()?;
            }
        }
        Format::Json => {
            let mut doc = JsonRows::begin(out)?;
            euler_march_each(&PrecisionDecimal::one(), step, working, |k, v| {
                if failure.is_none() {
                    failure = doc.push(&row(k, v)).err();
                }
            });
            if failure.is_none() {
                doc.end()?;
            }
        }
        Format::Table => {
            let number = p as usize + 2;
            let widths = [step.n().to_string().len().max(1), number, number, number];
            let header: Vec<String> = ["k", "x", "value", "ratio"].iter().map(|s| s.to_string()).collect();
            write_table_row(out, &header, &widths)?;
            euler_march_each(&PrecisionDecimal::one(), step, working, |k, v| {
                if failure.is_none() {
                    let r = row(k, v);
                    let cells = [k.to_string(), r.x.to_string(), r.value.to_string(), r.ratio.to_string()];
                    failure = write_table_row(out, &cells, &widths).err().map(RunError::from);
                }
            });
        }
    }
    failure.map_or(Ok(()), Err)
}

fn write_sweep_table(report: &ConvergenceReport, minimum: usize, out: &mut dyn Write) -> Result<(), RunError> {
    let rows: Vec<Vec<String>> = report
        .sweep
        .iter()
        .enumerate()
        .map(|(i, SweepRow { dx, mode, abs_error })| {
            vec![
                dx.to_string(),
                mode.clone(),
                short_error(abs_error),
                if i == minimum { "*".into() } else { String::new() },
            ]
        })
        .collect();
    write_table(out, &["dx", "mode", "abs_error", "min"], &rows)?;
    writeln!(out)?;
    let exact_rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| vec![r.n.to_string(), short_error(&r.abs_error)])
        .collect();
    write_table(out, &["n", "exact_abs_error"], &exact_rows)?;
    writeln!(out)?;
    let order = report
        .estimated_order
        .map(|q| format!("{q:.6}"))
        .unwrap_or_else(|| "-".into());
    writeln!(out, "estimated_order     {order}")?;
    writeln!(out, "scaled_error_limit  {}", report.scaled_error_limit.round(10))?;
    let extrapolated = report
        .extrapolated
        .as_ref()
        .map(|x| x.to_string())
        .unwrap_or_else(|| "-".into());
    writeln!(out, "extrapolated        {extrapolated}")?;
    Ok(())
}
