//! Exact decimal arithmetic, integer powering and the reference oracle for e.

mod arith;
mod decimal;
mod oracle;

pub use arith::{
    ceil_log10, dec_add, dec_div, dec_mul, dec_pow_int, dec_pow_int_counted, dec_sub, MulCounter,
    RoundingMode, RoundingPolicy,
};
pub(crate) use arith::pow_at_working_precision;
pub use decimal::PrecisionDecimal;
pub use oracle::{reference_e, MAX_REFERENCE_DIGITS};
