//! Reference value of e from the factorial series `Σ 1/k!`.
//!
//! This is the independent oracle that every approximation is measured against;
//! it shares nothing with the powering path except the final rounding.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::arith::ceil_log10;
use super::decimal::{pow10, PrecisionDecimal};

pub const MAX_REFERENCE_DIGITS: u32 = 10_000;

/// e rounded half-even to `digits` significant digits.
///
/// The series is summed in fixed point at `digits + guard` fractional digits and cut
/// once the tail bound `2/(K+1)!` drops below `10^-(digits + guard)`.
pub fn reference_e(digits: u32) -> PrecisionDecimal {
    assert!(
        (1..=MAX_REFERENCE_DIGITS).contains(&digits),
        "reference digits must lie in 1..={MAX_REFERENCE_DIGITS}"
    );
    // Each truncated term is off by under one unit in the last place, and at most
    // ~digits terms are summed, so the guard has to absorb log10(digits) units.
    let guard = ceil_log10(u64::from(digits)) + 8;
    let work = u64::from(digits + guard);
    let terms = series_terms_needed(work);

    let scale = pow10(work);
    let mut sum = BigUint::zero();
    let mut term = scale;
    for k in 1..=terms + 1 {
        sum += &term;
        term /= k;
        if term.is_zero() {
            break;
        }
    }
    PrecisionDecimal::new(BigInt::from(sum), -(work as i64)).round(digits)
}

/// Smallest `K` with `2/(K+1)! < 10^-work`.
fn series_terms_needed(work: u64) -> u64 {
    let target = work as f64 + std::f64::consts::LOG10_2;
    let mut log10_factorial = 0.0f64;
    let mut k = 0u64;
    loop {
        log10_factorial += ((k + 1) as f64).log10();
        if log10_factorial > target + 1.0 {
            return k;
        }
        k += 1;
    }
}
