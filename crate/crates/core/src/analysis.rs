//! Convergence rate, first-order error model, Richardson extrapolation, and the
//! truncation-versus-rounding sweep for binary64 evaluation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limit::{check_float_n, eval_float, Approximation, FloatMode, Mode};
use crate::numerics::{dec_div, reference_e, PrecisionDecimal};
use crate::report::{ErrorRow, SweepRow};
use crate::REFERENCE_DIGITS;

/// Digits kept when forming error ratios before the logarithm.
const RATIO_DIGITS: u32 = 30;

/// Sweep grids may reach `1/dx = 10^14`.
pub const SWEEP_MAX_INVERSE_DX: f64 = 1e14;

/// Window the measured order must fall in before a first-order extrapolation is trusted.
pub const FIRST_ORDER_WINDOW: (f64, f64) = (0.9, 1.1);

/// Empirical order `log2(e1/e2)` from errors at steps `h` and `h/2`.
pub fn estimate_order(e1: &PrecisionDecimal, e2: &PrecisionDecimal) -> Result<f64> {
    if !e1.is_positive() || !e2.is_positive() {
        return Err(Error::NonPositiveError);
    }
    let ratio = dec_div(e1, e2, RATIO_DIGITS)?;
    Ok(ratio.to_f64().log2())
}

/// Order between arbitrary step counts: `ln(e1/e2) / ln(n2/n1)`.
pub fn order_between(n1: u64, e1: &PrecisionDecimal, n2: u64, e2: &PrecisionDecimal) -> Result<f64> {
    if n2 <= n1 {
        return Err(Error::MismatchedSteps { coarse: n1, fine: n2 });
    }
    if !e1.is_positive() || !e2.is_positive() {
        return Err(Error::NonPositiveError);
    }
    let ratio = dec_div(e1, e2, RATIO_DIGITS)?;
    Ok(ratio.to_f64().ln() / (n2 as f64 / n1 as f64).ln())
}

/// `abs_error · n` at the finest step. Under the first-order model
/// `e − (1 + 1/n)^n ≈ e/(2n)` this tends to `e/2`.
pub fn scaled_error(rows: &[ErrorRow]) -> Result<PrecisionDecimal> {
    let last = rows.last().ok_or(Error::EmptyRows)?;
    Ok(last.abs_error.mul_exact(&PrecisionDecimal::from(last.n)))
}

/// First-order Richardson step: `2·A(h/2) − A(h)`, exact.
pub fn richardson_extrapolate(coarse: &Approximation, fine: &Approximation) -> Result<PrecisionDecimal> {
    if coarse.n().checked_mul(2) != Some(fine.n()) {
        return Err(Error::MismatchedSteps {
            coarse: coarse.n(),
            fine: fine.n(),
        });
    }
    Ok(fine.value.add_exact(&fine.value).sub_exact(&coarse.value))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub dx: f64,
    pub mode: FloatMode,
    /// Exact decimal expansion of the binary64 result.
    pub value: PrecisionDecimal,
    pub abs_error: PrecisionDecimal,
}

impl SweepPoint {
    pub fn to_row(&self) -> SweepRow {
        SweepRow {
            dx: float_to_decimal(self.dx),
            mode: Mode::Float(self.mode).to_string(),
            abs_error: self.abs_error.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// One point per grid entry, in grid order.
    pub points: Vec<SweepPoint>,
    minimum: usize,
}

impl SweepResult {
    /// Grid point with the smallest total error (the first one on ties).
    pub fn minimum(&self) -> &SweepPoint {
        &self.points[self.minimum]
    }
}

/// Shortest decimal string that reads back as `x`, e.g. `1e-8`.
pub fn float_to_decimal(x: f64) -> PrecisionDecimal {
    format!("{x:e}").parse().expect("finite float formats as a decimal")
}

/// `dx = 10^-k` for `k = from..=to`, each the binary64 nearest to the decimal.
pub fn decade_grid(from: u32, to: u32) -> Vec<f64> {
    (from..=to)
        .map(|k| format!("1e-{k}").parse().expect("valid float literal"))
        .collect()
}

/// Total binary64 error of `(1 + dx)^(1/dx)` against the 25-digit reference at each
/// grid point. Truncation (`≈ e·dx/2`) shrinks with `dx` while the representation
/// error of `1 + dx` (`≈ e·u/dx`) grows, so the curve has an interior minimum.
pub fn float_error_sweep(dx_grid: &[f64], mode: FloatMode) -> Result<SweepResult> {
    if dx_grid.is_empty() {
        return Err(Error::GridOutOfRange("grid is empty".into()));
    }
    for &dx in dx_grid {
        if !(dx.is_finite() && dx > 0.0) {
            return Err(Error::GridOutOfRange(format!("dx={dx:e} is not positive")));
        }
        if 1.0 / dx > SWEEP_MAX_INVERSE_DX {
            return Err(Error::GridOutOfRange(format!("1/dx exceeds {SWEEP_MAX_INVERSE_DX:e} at dx={dx:e}")));
        }
        if mode == FloatMode::MultiplyLoop {
            check_float_n((1.0 / dx).round() as u64, mode)?;
        }
    }
    if dx_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::GridOutOfRange("dx grid must be strictly decreasing".into()));
    }

    let reference = reference_e(REFERENCE_DIGITS);
    let points: Vec<SweepPoint> = dx_grid
        .par_iter()
        .map(|&dx| {
            let value = eval_float(dx, 1.0 / dx, mode);
            let value = PrecisionDecimal::from_f64(value).expect("finite approximant");
            let abs_error = value.sub_exact(&reference).abs();
            SweepPoint { dx, mode, value, abs_error }
        })
        .collect();
    let minimum = points
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.abs_error.cmp(&b.abs_error))
        .map(|(i, _)| i)
        .expect("grid is non-empty");
    Ok(SweepResult { points, minimum })
}

/// Errors across a schedule, their empirical order, the scaled error, a Richardson
/// estimate, and optionally a binary64 sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ErrorRow>,
    pub estimated_order: Option<f64>,
    pub scaled_error_limit: PrecisionDecimal,
    pub extrapolated: Option<PrecisionDecimal>,
    #[serde(default)]
    pub sweep: Vec<SweepRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_minimum: Option<PrecisionDecimal>,
}

impl ConvergenceReport {
    /// Builds the report from approximations that already carry `abs_error`.
    ///
    /// The order comes from the two finest rows. The extrapolated value is filled only
    /// when those rows are a `(n, 2n)` pair and the measured order lies in
    /// [`FIRST_ORDER_WINDOW`].
    pub fn from_approximations(approxs: &[Approximation], sweep: Option<&SweepResult>) -> Result<Self> {
        let rows = approxs
            .iter()
            .map(|a| {
                let abs_error = a.abs_error.clone().ok_or(Error::EmptyRows)?;
                Ok(ErrorRow { n: a.n(), abs_error })
            })
            .collect::<Result<Vec<_>>>()?;
        let scaled_error_limit = scaled_error(&rows)?;

        let mut estimated_order = None;
        let mut extrapolated = None;
        if let [.., coarse, fine] = approxs {
            let (ec, ef) = (coarse.abs_error.as_ref().unwrap(), fine.abs_error.as_ref().unwrap());
            let order = order_between(coarse.n(), ec, fine.n(), ef)?;
            estimated_order = Some(order);
            let (lo, hi) = FIRST_ORDER_WINDOW;
            if (lo..=hi).contains(&order) {
                extrapolated = richardson_extrapolate(coarse, fine).ok();
            }
        }

        Ok(Self {
            rows,
            estimated_order,
            scaled_error_limit,
            extrapolated,
            sweep: sweep
                .map(|s| s.points.iter().map(SweepPoint::to_row).collect())
                .unwrap_or_default(),
            sweep_minimum: sweep.map(|s| float_to_decimal(s.minimum().dx)),
        })
    }
}
