//! Rounded arithmetic on [`PrecisionDecimal`].
//!
//! Every operation rounds its exact result once, half-even, to `p` significant
//! digits. Results that already fit in `p` digits come back unrounded.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::decimal::{pow10, round_parts, PrecisionDecimal};
use crate::error::Error;

fn check_precision(p: u32) {
    assert!(p >= 1, "precision must be at least 1");
}

/// `a + b` rounded to `p` significant digits.
pub fn dec_add(a: &PrecisionDecimal, b: &PrecisionDecimal, p: u32) -> PrecisionDecimal {
    check_precision(p);
    if a.is_zero() {
        return b.round(p);
    }
    if b.is_zero() {
        return a.round(p);
    }
    let (big, small) = if a.adjusted() >= b.adjusted() {
        (a, b)
    } else {
        (b, a)
    };
    // Below `cutoff` the smaller operand cannot move the sum across a rounding
    // boundary of the result, only its sign matters. Replacing it with a unit at a
    // fixed low position keeps the exact sum from growing with the exponent gap.
    let cutoff = big.exponent().min(big.adjusted() - p as i64 - 2) - 1;
    if small.adjusted() < cutoff {
        let unit = if small.is_negative() { -1 } else { 1 };
        let stand_in = PrecisionDecimal::new(unit, cutoff - 1);
        return big.add_exact(&stand_in).round(p);
    }
    a.add_exact(b).round(p)
}

/// `a - b` rounded to `p` significant digits.
pub fn dec_sub(a: &PrecisionDecimal, b: &PrecisionDecimal, p: u32) -> PrecisionDecimal {
    dec_add(a, &b.neg(), p)
}

/// `a · b` rounded to `p` significant digits.
pub fn dec_mul(a: &PrecisionDecimal, b: &PrecisionDecimal, p: u32) -> PrecisionDecimal {
    check_precision(p);
    let exact = a.mantissa() * b.mantissa();
    round_parts(exact, a.exponent() + b.exponent(), p, false)
}

/// `a / b` correctly rounded to `p` significant digits.
pub fn dec_div(a: &PrecisionDecimal, b: &PrecisionDecimal, p: u32) -> Result<PrecisionDecimal, Error> {
    check_precision(p);
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if a.is_zero() {
        return Ok(PrecisionDecimal::zero());
    }
    let da = a.significant_digits() as i64;
    let db = b.significant_digits() as i64;
    // Enough quotient digits that the rounding digit is known; the remainder
    // becomes the sticky bit.
    let shift = (p as i64 + 2 + db - da).max(0) as u64;
    let numerator = a.mantissa().magnitude() * pow10(shift);
    let (quotient, remainder) = numerator.div_rem(b.mantissa().magnitude());
    let negative = a.is_negative() != b.is_negative();
    let mut signed = BigInt::from(quotient);
    if negative {
        signed = -signed;
    }
    Ok(round_parts(
        signed,
        a.exponent() - b.exponent() - shift as i64,
        p,
        !remainder.is_zero(),
    ))
}

/// Rounding behaviour for multi-step computations.
///
/// Only round-half-even exists; `guard_digits` are carried on top of the requested
/// precision and dropped by a single final rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundingPolicy {
    pub mode: RoundingMode,
    pub guard_digits: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RoundingMode {
    #[default]
    HalfEven,
}

impl RoundingPolicy {
    pub fn with_guard_digits(guard_digits: u32) -> Self {
        Self {
            mode: RoundingMode::HalfEven,
            guard_digits,
        }
    }

    /// Guard for a power with exponent `n`: `ceil(log10 n) + 5`.
    ///
    /// A rounded product has relative error at most `10^(1-w)` at working precision
    /// `w`, and a chain producing `x^n` rounds at most `n` times.
    pub fn for_exponent(n: u64) -> Self {
        Self::with_guard_digits(ceil_log10(n) + 5)
    }

    pub fn working_precision(&self, p: u32) -> u32 {
        p + self.guard_digits
    }
}

/// `ceil(log10 n)`, with `ceil_log10(0) = ceil_log10(1) = 0`.
pub fn ceil_log10(n: u64) -> u32 {
    if n <= 1 {
        return 0;
    }
    // For n >= 2, ceil(log10 n) is the digit count of n - 1.
    let mut m = n - 1;
    let mut digits = 0;
    while m > 0 {
        m /= 10;
        digits += 1;
    }
    digits
}

/// Per-call multiplication counter for the powering routines.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct MulCounter {
    pub multiplications: u64,
}

impl MulCounter {
    pub fn new() -> Self {
        Self::default()
    }

    fn mul(&mut self, a: &PrecisionDecimal, b: &PrecisionDecimal, p: u32) -> PrecisionDecimal {
        self.multiplications += 1;
        dec_mul(a, b, p)
    }
}

/// `base^n` rounded to `p` significant digits, by square-and-multiply with guard digits.
pub fn dec_pow_int(base: &PrecisionDecimal, n: u64, p: u32) -> PrecisionDecimal {
    dec_pow_int_counted(base, n, p, &mut MulCounter::new())
}

/// [`dec_pow_int`] that records each rounded multiplication in `counter`.
///
/// At most `2·floor(log2 n)` multiplications are performed.
pub fn dec_pow_int_counted(
    base: &PrecisionDecimal,
    n: u64,
    p: u32,
    counter: &mut MulCounter,
) -> PrecisionDecimal {
    check_precision(p);
    let working = RoundingPolicy::for_exponent(n).working_precision(p);
    pow_at_working_precision(base, n, working, counter).round(p)
}

/// Square-and-multiply with every intermediate rounded to `working` digits.
pub(crate) fn pow_at_working_precision(
    base: &PrecisionDecimal,
    n: u64,
    working: u32,
    counter: &mut MulCounter,
) -> PrecisionDecimal {
    if n == 0 {
        return PrecisionDecimal::one();
    }
    let base = base.round(working);
    let top_bit = 63 - n.leading_zeros();
    let mut acc = base.clone();
    for bit in (0..top_bit).rev() {
        acc = counter.mul(&acc, &acc, working);
        if (n >> bit) & 1 == 1 {
            acc = counter.mul(&acc, &base, working);
        }
    }
    acc
}
