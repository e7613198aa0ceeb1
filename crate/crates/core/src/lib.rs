//! Numerics laboratory for e obtained by forward-Euler marching of `f' = f` across
//! `[1, 2]`, and by the compound limit `(1 + Δx)^(1/Δx)`.
//!
//! - [`numerics`]: exact decimals, square-and-multiply powering, the series oracle.
//! - [`euler`]: step specifications and the march `f(x + Δx) ≅ f(x)(1 + Δx)`.
//! - [`limit`]: the compound approximant in exact and binary64 arithmetic, over schedules.
//! - [`analysis`]: convergence order, scaled error, Richardson extrapolation, float sweeps.
//! - [`report`]: CSV and JSON row formats.

pub mod analysis;
pub mod error;
pub mod euler;
pub mod limit;
pub mod numerics;
pub mod report;

pub use analysis::{
    estimate_order, float_error_sweep, order_between, richardson_extrapolate, scaled_error,
    ConvergenceReport, SweepPoint, SweepResult,
};
pub use error::{Error, ParseDecimalError, Result};
pub use euler::{
    euler_march, euler_march_each, euler_march_with_checkpoints, euler_step, ratio_at,
    solve_for_e_euler, EulerTrajectory, StepSize, StepSpec,
};
pub use limit::{
    compound_approx, compound_approx_counted, float_compound_approx, limit_schedule,
    limit_schedule_with_mode, Approximation, FloatMode, Mode, Schedule, ScheduleKind,
};
pub use numerics::{
    dec_add, dec_div, dec_mul, dec_pow_int, dec_pow_int_counted, dec_sub, reference_e, MulCounter,
    PrecisionDecimal, RoundingMode, RoundingPolicy,
};

/// Significant digits of the reference value used for every error measurement.
pub const REFERENCE_DIGITS: u32 = 25;
