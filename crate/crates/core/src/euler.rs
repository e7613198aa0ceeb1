//! Forward-Euler march of `f' = f` from `x = 1` to `x = 2`.
//!
//! With `f' = f` one step is `f(x + Δx) ≅ f(x)(1 + Δx)`, so after `k` steps from a
//! starting value `C` the march holds `C(1 + Δx)^k`. Reaching `x = 2` takes exactly
//! `1/Δx = n` steps, and dividing the final value by the starting one isolates the
//! estimate of e.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::limit::{Approximation, Mode};
use crate::numerics::{dec_div, dec_mul, PrecisionDecimal, RoundingPolicy};

/// Marches up to this many steps keep every value; longer ones keep checkpoints only.
pub const FULL_STORAGE_LIMIT: u64 = 1_000_000;

/// How `Δx = 1/n` is carried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepSize {
    /// `n` is a power of ten, so `Δx` is a short exact decimal.
    Decimal(PrecisionDecimal),
    /// Exact rational `1/denominator`.
    Reciprocal { denominator: u64 },
}

/// Step size `Δx = 1/n` for a whole number `n ≥ 1` of steps across a unit interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepSpec {
    n: u64,
    dx: StepSize,
}

fn power_of_ten_exponent(n: u64) -> Option<u32> {
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(10) {
        m /= 10;
        k += 1;
    }
    (m == 1).then_some(k)
}

impl StepSpec {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSteps);
        }
        let dx = match power_of_ten_exponent(n) {
            Some(k) => StepSize::Decimal(PrecisionDecimal::new(1, -i64::from(k))),
            None => StepSize::Reciprocal { denominator: n },
        };
        Ok(Self { n, dx })
    }

    /// Number of steps, i.e. `1/Δx`.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dx(&self) -> &StepSize {
        &self.dx
    }

    /// `Δx` as a decimal; exact whenever `1/n` terminates within `p` digits.
    pub fn dx_decimal(&self, p: u32) -> PrecisionDecimal {
        match &self.dx {
            StepSize::Decimal(dx) => dx.round(p),
            StepSize::Reciprocal { denominator } => {
                dec_div(&PrecisionDecimal::one(), &PrecisionDecimal::from(*denominator), p)
                    .expect("denominator is nonzero")
            }
        }
    }

    /// `1 + Δx` rounded to `p` digits.
    pub fn growth_factor(&self, p: u32) -> PrecisionDecimal {
        match &self.dx {
            StepSize::Decimal(dx) => PrecisionDecimal::one().add_exact(dx).round(p),
            StepSize::Reciprocal { denominator } => dec_div(
                &PrecisionDecimal::from(denominator + 1),
                &PrecisionDecimal::from(*denominator),
                p,
            )
            .expect("denominator is nonzero"),
        }
    }

    /// Grid point `x_k = 1 + k/n`, rounded to `p` digits.
    pub fn x_at(&self, k: u64, p: u32) -> PrecisionDecimal {
        let numerator = PrecisionDecimal::from_integer(BigInt::from(self.n) + BigInt::from(k));
        dec_div(&numerator, &PrecisionDecimal::from(self.n), p).expect("n is nonzero")
    }
}

/// One Euler step for `f' = f`: `value · (1 + Δx)` rounded to `p` digits.
pub fn euler_step(value: &PrecisionDecimal, step: &StepSpec, p: u32) -> PrecisionDecimal {
    match &step.dx {
        StepSize::Decimal(dx) => dec_mul(value, &PrecisionDecimal::one().add_exact(dx), p),
        StepSize::Reciprocal { denominator } => {
            // value·(n+1)/n with a single rounding
            let numerator = value.mul_exact(&PrecisionDecimal::from(denominator + 1));
            dec_div(&numerator, &PrecisionDecimal::from(*denominator), p)
                .expect("denominator is nonzero")
        }
    }
}

/// Marched values `f(1), f(1 + Δx), …, f(2)` starting from `f(1) = C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerTrajectory {
    initial_scale: PrecisionDecimal,
    step: StepSpec,
    precision: u32,
    retained: Vec<(u64, PrecisionDecimal)>,
}

impl EulerTrajectory {
    pub fn initial_scale(&self) -> &PrecisionDecimal {
        &self.initial_scale
    }

    pub fn step(&self) -> &StepSpec {
        &self.step
    }

    /// Working precision every step was rounded to.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Whether all `n + 1` values are stored.
    pub fn is_complete(&self) -> bool {
        self.retained.len() as u64 == self.step.n + 1
    }

    pub fn value(&self, k: u64) -> Result<&PrecisionDecimal> {
        if k > self.step.n {
            return Err(Error::IndexOutOfRange { index: k, n: self.step.n });
        }
        self.retained
            .binary_search_by_key(&k, |(i, _)| *i)
            .map(|pos| &self.retained[pos].1)
            .map_err(|_| Error::NotRetained(k))
    }

    /// Stored `(k, value)` pairs in increasing `k`.
    pub fn values(&self) -> impl Iterator<Item = (u64, &PrecisionDecimal)> {
        self.retained.iter().map(|(k, v)| (*k, v))
    }

    pub fn final_value(&self) -> &PrecisionDecimal {
        &self.retained.last().expect("trajectory holds at least two points").1
    }

    /// `x_k = 1 + kΔx` at the trajectory's precision.
    pub fn x_at(&self, k: u64) -> Result<PrecisionDecimal> {
        if k > self.step.n {
            return Err(Error::IndexOutOfRange { index: k, n: self.step.n });
        }
        Ok(self.step.x_at(k, self.precision))
    }
}

/// Runs the march and hands every `(k, value)` to `visit`, keeping nothing.
///
/// Returns the final value `f(2)`.
pub fn euler_march_each(
    scale: &PrecisionDecimal,
    step: &StepSpec,
    p: u32,
    mut visit: impl FnMut(u64, &PrecisionDecimal),
) -> PrecisionDecimal {
    let mut value = scale.clone();
    visit(0, &value);
    for k in 1..=step.n {
        value = euler_step(&value, step, p);
        visit(k, &value);
    }
    value
}

/// Full march from `f(1) = scale`; every value is kept when `n ≤ FULL_STORAGE_LIMIT`,
/// otherwise only the endpoints.
pub fn euler_march(scale: &PrecisionDecimal, step: &StepSpec, p: u32) -> EulerTrajectory {
    if step.n <= FULL_STORAGE_LIMIT {
        let mut retained = Vec::with_capacity(step.n as usize + 1);
        euler_march_each(scale, step, p, |k, v| retained.push((k, v.clone())));
        EulerTrajectory {
            initial_scale: scale.clone(),
            step: step.clone(),
            precision: p,
            retained,
        }
    } else {
        euler_march_with_checkpoints(scale, step, p, &[]).expect("no checkpoints to validate")
    }
}

/// March keeping only the endpoints and the listed indices.
pub fn euler_march_with_checkpoints(
    scale: &PrecisionDecimal,
    step: &StepSpec,
    p: u32,
    checkpoints: &[u64],
) -> Result<EulerTrajectory> {
    if let Some(&bad) = checkpoints.iter().find(|&&k| k > step.n) {
        return Err(Error::IndexOutOfRange { index: bad, n: step.n });
    }
    let mut wanted: Vec<u64> = checkpoints.to_vec();
    wanted.extend([0, step.n]);
    wanted.sort_unstable();
    wanted.dedup();

    let mut retained = Vec::with_capacity(wanted.len());
    let mut next = 0;
    euler_march_each(scale, step, p, |k, v| {
        if next < wanted.len() && wanted[next] == k {
            retained.push((k, v.clone()));
            next += 1;
        }
    });
    Ok(EulerTrajectory {
        initial_scale: scale.clone(),
        step: step.clone(),
        precision: p,
        retained,
    })
}

/// Accumulated factor `(1 + Δx)^k = values[k] / C` at the trajectory's precision.
pub fn ratio_at(traj: &EulerTrajectory, k: u64) -> Result<PrecisionDecimal> {
    let value = traj.value(k)?;
    if traj.initial_scale.is_zero() {
        return Err(Error::ZeroScale);
    }
    dec_div(value, &traj.initial_scale, traj.precision)
}

/// Marches `f(1) = 1` to `f(2)` and reads off `e ≅ (1 + Δx)^n`.
///
/// The march runs with `ceil(log10 n) + 5` guard digits and the ratio is rounded once
/// to `p` digits.
pub fn solve_for_e_euler(step: &StepSpec, p: u32) -> Approximation {
    let working = RoundingPolicy::for_exponent(step.n).working_precision(p);
    let traj = euler_march_with_checkpoints(&PrecisionDecimal::one(), step, working, &[])
        .expect("no checkpoints to validate");
    let ratio = ratio_at(&traj, step.n).expect("final index is retained and scale is one");
    Approximation::new(step.clone(), ratio.round(p), Mode::Exact)
}
