//! Row types and their CSV / JSON encodings.
//!
//! Every numeric field except step counts is written as a decimal string, so a
//! report re-parses into exactly the values that produced it. CSV always carries a
//! header row, uses `,` separators and `\n` line endings. JSON documents are a
//! single object holding a `rows` array.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::euler::EulerTrajectory;
use crate::limit::Approximation;
use crate::numerics::PrecisionDecimal;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ReportError {
    /// Whether the failure came from the underlying reader or writer.
    pub fn is_io(&self) -> bool {
        match self {
            ReportError::Io(_) => true,
            ReportError::Csv(e) => matches!(e.kind(), csv::ErrorKind::Io(_)),
            ReportError::Json(e) => e.is_io(),
        }
    }
}

/// `k,x,value,ratio`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub k: u64,
    pub x: PrecisionDecimal,
    pub value: PrecisionDecimal,
    pub ratio: PrecisionDecimal,
}

/// `n,dx,mode,value,abs_error`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproximationRow {
    pub n: u64,
    pub dx: PrecisionDecimal,
    pub mode: String,
    pub value: PrecisionDecimal,
    pub abs_error: Option<PrecisionDecimal>,
}

impl ApproximationRow {
    /// `dx` is exact when `1/n` terminates within `precision` digits.
    pub fn new(approx: &Approximation, precision: u32) -> Self {
        Self {
            n: approx.n(),
            dx: approx.step.dx_decimal(precision),
            mode: approx.mode.to_string(),
            value: approx.value.clone(),
            abs_error: approx.abs_error.clone(),
        }
    }
}

/// `n,abs_error`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub n: u64,
    pub abs_error: PrecisionDecimal,
}

/// `dx,mode,abs_error`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub dx: PrecisionDecimal,
    pub mode: String,
    pub abs_error: PrecisionDecimal,
}

/// `digits,value`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRow {
    pub digits: u32,
    /// Printed with exactly `digits` significant digits.
    pub value: String,
}

/// Rows for every retained point of a trajectory; ratios at the trajectory's precision.
pub fn trajectory_rows(traj: &EulerTrajectory) -> crate::Result<Vec<TrajectoryRow>> {
    traj.values()
        .map(|(k, value)| {
            Ok(TrajectoryRow {
                k,
                x: traj.x_at(k)?,
                value: value.clone(),
                ratio: crate::euler::ratio_at(traj, k)?,
            })
        })
        .collect()
}

/// JSON document shape `{"rows": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowsDocument<T> {
    pub rows: Vec<T>,
}

pub fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .has_headers(true)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<(), ReportError> {
    let mut writer = csv_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Header-only output for an empty row set still needs the field names.
pub fn write_csv_header<W: Write>(fields: &[&str], out: W) -> Result<(), ReportError> {
    let mut writer = csv_writer(out);
    writer.write_record(fields)?;
    writer.flush()?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned, R: Read>(input: R) -> Result<Vec<T>, ReportError> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input)
        .deserialize()
        .map(|r| r.map_err(ReportError::from))
        .collect()
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<(), ReportError> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned, R: Read>(input: R) -> Result<T, ReportError> {
    Ok(serde_json::from_reader(input)?)
}
