//! The compound approximant `(1 + Δx)^(1/Δx)` and its limit as `Δx → 0`.
//!
//! Exact-decimal evaluation goes through square-and-multiply with guard digits.
//! The binary64 modes exist to show how the same quantity behaves in machine
//! arithmetic.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::euler::StepSpec;
use crate::numerics::{pow_at_working_precision, reference_e, MulCounter, PrecisionDecimal, RoundingPolicy};

/// Largest `n` accepted by the binary64 modes.
pub const FLOAT_MAX_N: u64 = 1_000_000_000_000;
/// Largest `n` the multiply loop will iterate.
pub const MULTIPLY_LOOP_MAX_N: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FloatMode {
    /// `powf(1 + Δx, 1/Δx)`.
    Pow,
    /// Multiply `1 + Δx` into an accumulator `1/Δx` times.
    MultiplyLoop,
    /// `exp((1/Δx)·log(1 + Δx))` with a series logarithm for small `Δx`.
    LogExp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float(FloatMode),
}

impl Mode {
    pub const ALL: [Mode; 4] = [
        Mode::Exact,
        Mode::Float(FloatMode::Pow),
        Mode::Float(FloatMode::MultiplyLoop),
        Mode::Float(FloatMode::LogExp),
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float(FloatMode::Pow) => "float-pow",
            Mode::Float(FloatMode::MultiplyLoop) => "float-multiply-loop",
            Mode::Float(FloatMode::LogExp) => "float-log-exp",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownMode(s.to_string()))
    }
}

impl From<FloatMode> for Mode {
    fn from(mode: FloatMode) -> Self {
        Mode::Float(mode)
    }
}

/// One candidate value for e.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approximation {
    pub step: StepSpec,
    pub value: PrecisionDecimal,
    pub mode: Mode,
    /// `|value − e|`, once a reference has been attached.
    pub abs_error: Option<PrecisionDecimal>,
}

impl Approximation {
    pub fn new(step: StepSpec, value: PrecisionDecimal, mode: Mode) -> Self {
        Self {
            step,
            value,
            mode,
            abs_error: None,
        }
    }

    /// Attaches the exact distance to `reference`.
    pub fn with_reference(mut self, reference: &PrecisionDecimal) -> Self {
        self.abs_error = Some(self.value.sub_exact(reference).abs());
        self
    }

    pub fn n(&self) -> u64 {
        self.step.n()
    }
}

/// `(1 + 1/n)^n` in exact decimal arithmetic, rounded to `p` digits.
pub fn compound_approx(step: &StepSpec, p: u32) -> Approximation {
    compound_approx_counted(step, p, &mut MulCounter::new())
}

/// [`compound_approx`] recording the big multiplications in `counter`.
pub fn compound_approx_counted(step: &StepSpec, p: u32, counter: &mut MulCounter) -> Approximation {
    assert!(p >= 1, "precision must be at least 1");
    let working = RoundingPolicy::for_exponent(step.n()).working_precision(p);
    let base = step.growth_factor(working);
    let value = pow_at_working_precision(&base, step.n(), working, counter).round(p);
    Approximation::new(step.clone(), value, Mode::Exact)
}

/// `log(1 + u)`: a five-term series for `|u| ≤ 2^-20`, the platform `ln_1p` beyond.
pub fn log1p_series(u: f64) -> f64 {
    const SERIES_LIMIT: f64 = 1.0 / 1_048_576.0;
    if u.abs() > SERIES_LIMIT {
        return u.ln_1p();
    }
    // u - u²/2 + u³/3 - u⁴/4 + u⁵/5; the u⁵ term is below 2^-80 relative.
    u * (1.0 - u * (0.5 - u * (1.0 / 3.0 - u * (0.25 - u * 0.2))))
}

/// Binary64 evaluation of `(1 + dx)^exponent`; the loop runs `round(exponent)` times.
pub(crate) fn eval_float(dx: f64, exponent: f64, mode: FloatMode) -> f64 {
    match mode {
        FloatMode::Pow => (1.0 + dx).powf(exponent),
        FloatMode::MultiplyLoop => {
            let base = 1.0 + dx;
            let reps = exponent.round() as u64;
            let mut acc = 1.0f64;
            for _ in 0..reps {
                acc *= base;
            }
            acc
        }
        FloatMode::LogExp => (exponent * log1p_series(dx)).exp(),
    }
}

pub(crate) fn check_float_n(n: u64, mode: FloatMode) -> Result<()> {
    if n > FLOAT_MAX_N {
        return Err(Error::StepTooSmall { n, limit: FLOAT_MAX_N });
    }
    if mode == FloatMode::MultiplyLoop && n > MULTIPLY_LOOP_MAX_N {
        return Err(Error::TooManyIterations {
            n,
            limit: MULTIPLY_LOOP_MAX_N,
        });
    }
    Ok(())
}

/// `(1 + 1/n)^n` in binary64. The value is stored as the exact decimal expansion
/// of the resulting double.
pub fn float_compound_approx(step: &StepSpec, mode: FloatMode) -> Result<Approximation> {
    let n = step.n();
    check_float_n(n, mode)?;
    let value = eval_float(1.0 / n as f64, n as f64, mode);
    let value = PrecisionDecimal::from_f64(value).expect("compound approximant is finite");
    Ok(Approximation::new(step.clone(), value, Mode::Float(mode)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    PowersOfTen,
    Doubling,
    ExplicitList,
}

/// Shrinking step sizes: strictly increasing `n`, never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    kind: ScheduleKind,
    entries: Vec<StepSpec>,
}

impl Schedule {
    /// `n = 10^from ..= 10^to`.
    pub fn powers_of_ten(from: u32, to: u32) -> Result<Self> {
        if from > to || to > 19 {
            return Err(Error::InvalidSchedule(format!(
                "pow10 range {from}..{to} must satisfy from ≤ to ≤ 19"
            )));
        }
        let entries = (from..=to)
            .map(|k| StepSpec::new(10u64.pow(k)))
            .collect::<Result<_>>()?;
        Ok(Self {
            kind: ScheduleKind::PowersOfTen,
            entries,
        })
    }

    /// `n = 2^from ..= 2^to`.
    pub fn doubling(from: u32, to: u32) -> Result<Self> {
        if from > to || to > 63 {
            return Err(Error::InvalidSchedule(format!(
                "doubling range {from}..{to} must satisfy from ≤ to ≤ 63"
            )));
        }
        let entries = (from..=to)
            .map(|k| StepSpec::new(1u64 << k))
            .collect::<Result<_>>()?;
        Ok(Self {
            kind: ScheduleKind::Doubling,
            entries,
        })
    }

    pub fn explicit(ns: &[u64]) -> Result<Self> {
        if ns.is_empty() {
            return Err(Error::InvalidSchedule("list is empty".into()));
        }
        if ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSchedule("list must be strictly increasing".into()));
        }
        let entries = ns.iter().map(|&n| StepSpec::new(n)).collect::<Result<_>>()?;
        Ok(Self {
            kind: ScheduleKind::ExplicitList,
            entries,
        })
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn entries(&self) -> &[StepSpec] {
        &self.entries
    }
}

impl FromStr for Schedule {
    type Err = Error;

    /// `pow10:A..B`, `doubling:A..B` or `list:n1,n2,…`.
    fn from_str(s: &str) -> Result<Self> {
        let invalid = || Error::InvalidSchedule(format!("cannot parse {s:?}"));
        let (kind, body) = s.split_once(':').ok_or_else(invalid)?;
        let range = || -> Result<(u32, u32)> {
            let (a, b) = body.split_once("..").ok_or_else(invalid)?;
            Ok((a.parse().map_err(|_| invalid())?, b.parse().map_err(|_| invalid())?))
        };
        match kind {
            "pow10" => {
                let (a, b) = range()?;
                Self::powers_of_ten(a, b)
            }
            "doubling" => {
                let (a, b) = range()?;
                Self::doubling(a, b)
            }
            "list" => {
                let ns = body
                    .split(',')
                    .map(|t| t.trim().parse::<u64>().map_err(|_| invalid()))
                    .collect::<Result<Vec<_>>>()?;
                Self::explicit(&ns)
            }
            _ => Err(invalid()),
        }
    }
}

/// Exact-decimal approximants for every schedule entry, each with its error against
/// `reference_e(ref_digits)`.
pub fn limit_schedule(sched: &Schedule, p: u32, ref_digits: u32) -> Result<Vec<Approximation>> {
    limit_schedule_with_mode(sched, Mode::Exact, p, ref_digits)
}

/// [`limit_schedule`] in any arithmetic mode. Entries are evaluated in parallel and
/// returned in schedule order.
pub fn limit_schedule_with_mode(
    sched: &Schedule,
    mode: Mode,
    p: u32,
    ref_digits: u32,
) -> Result<Vec<Approximation>> {
    if ref_digits < p {
        return Err(Error::PrecisionExceedsReference { precision: p, ref_digits });
    }
    let reference = reference_e(ref_digits);
    sched
        .entries
        .par_iter()
        .map(|step| {
            let approx = match mode {
                Mode::Exact => compound_approx(step, p),
                Mode::Float(float) => float_compound_approx(step, float)?,
            };
            Ok(approx.with_reference(&reference))
        })
        .collect()
}
