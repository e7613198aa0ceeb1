//! Arbitrary-precision decimal numbers: an integer mantissa scaled by a power of ten.
//!
//! Values are always normalized: the mantissa carries no trailing zero, and zero is
//! stored as `0 × 10^0`. Normalization makes the derived `PartialEq`/`Hash`
//! structural, so two decimals compare equal exactly when they denote the same number.
//!
//! Rounding is round-half-even to a requested number of significant digits.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, ParseDecimalError};

const LOG10_2: f64 = std::f64::consts::LOG10_2;

/// Values whose leading digit sits outside this window print in scientific notation.
const PLAIN_MIN_ADJUSTED: i64 = -6;
const PLAIN_MAX_EXPONENT: i64 = 20;

/// Largest exponent magnitude accepted by the parser.
const MAX_PARSE_EXPONENT: i64 = 1_000_000_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PrecisionDecimal {
    mantissa: BigInt,
    exponent: i64,
}

pub(crate) fn pow10(k: u64) -> BigUint {
    let k = u32::try_from(k).expect("power of ten exceeds u32 range");
    BigUint::from(10u32).pow(k)
}

/// Number of decimal digits in `n`; zero has one digit.
pub(crate) fn digit_count(n: &BigUint) -> u64 {
    let bits = n.bits();
    if bits <= 1 {
        return 1;
    }
    // 10^(est-1) <= 2^(bits-1) <= n, so n has either `est` or `est + 1` digits.
    let est = ((bits - 1) as f64 * LOG10_2).floor() as u64 + 1;
    if *n >= pow10(est) {
        est + 1
    } else {
        est
    }
}

fn strip_trailing_zeros(mantissa: &mut BigInt, exponent: &mut i64) {
    if mantissa.is_zero() {
        *exponent = 0;
        return;
    }
    let chunk = BigInt::from(10_000_000_000_000_000u64);
    loop {
        let (q, r) = mantissa.div_rem(&chunk);
        if !r.is_zero() {
            break;
        }
        *mantissa = q;
        *exponent += 16;
    }
    let ten = BigInt::from(10u32);
    loop {
        let (q, r) = mantissa.div_rem(&ten);
        if !r.is_zero() {
            break;
        }
        *mantissa = q;
        *exponent += 1;
    }
}

impl PrecisionDecimal {
    /// Builds `mantissa × 10^exponent`, normalizing the representation.
    pub fn new(mantissa: impl Into<BigInt>, exponent: i64) -> Self {
        let mut mantissa = mantissa.into();
        let mut exponent = exponent;
        strip_trailing_zeros(&mut mantissa, &mut exponent);
        Self { mantissa, exponent }
    }

    pub fn zero() -> Self {
        Self {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Self {
            mantissa: BigInt::one(),
            exponent: 0,
        }
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self::new(value, 0)
    }

    /// Exact decimal expansion of a finite binary64 value.
    ///
    /// Returns `None` for NaN and infinities.
    pub fn from_f64(value: f64) -> Option<Self> {
        if !value.is_finite() {
            return None;
        }
        if value == 0.0 {
            return Some(Self::zero());
        }
        let bits = value.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let fraction = bits & ((1u64 << 52) - 1);
        let (significand, exp2) = if biased == 0 {
            (fraction, -1074)
        } else {
            (fraction | (1u64 << 52), biased - 1075)
        };
        let mut mantissa = BigInt::from(significand);
        let exponent = if exp2 >= 0 {
            mantissa <<= exp2 as usize;
            0
        } else {
            // m·2^-k = m·5^k·10^-k
            mantissa *= BigInt::from(5u32).pow((-exp2) as u32);
            exp2
        };
        if negative {
            mantissa = -mantissa;
        }
        Some(Self::new(mantissa, exponent))
    }

    /// Nearest binary64 value.
    pub fn to_f64(&self) -> f64 {
        self.to_string()
            .parse()
            .expect("decimal display is a valid float literal")
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    /// Count of significant digits in the mantissa.
    pub fn significant_digits(&self) -> u64 {
        digit_count(self.mantissa.magnitude())
    }

    /// Decimal position of the leading digit: `d.ddd × 10^adjusted`.
    pub fn adjusted(&self) -> i64 {
        self.exponent + self.significant_digits() as i64 - 1
    }

    pub fn abs(&self) -> Self {
        Self {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    /// Round half-even to `precision` significant digits.
    pub fn round(&self, precision: u32) -> Self {
        round_parts(self.mantissa.clone(), self.exponent, precision, false)
    }

    /// Exact sum.
    pub fn add_exact(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.exponent <= other.exponent {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.exponent - lo.exponent) as u64;
        let scaled = &hi.mantissa * BigInt::from(pow10(shift));
        Self::new(scaled + &lo.mantissa, lo.exponent)
    }

    /// Exact difference.
    pub fn sub_exact(&self, other: &Self) -> Self {
        self.add_exact(&other.neg())
    }

    /// Exact product.
    pub fn mul_exact(&self, other: &Self) -> Self {
        Self::new(&self.mantissa * &other.mantissa, self.exponent + other.exponent)
    }

    /// Rounds half-even to `digits` significant digits and prints exactly that many,
    /// keeping trailing zeros, in plain positional notation.
    pub fn to_significant_string(&self, digits: u32) -> String {
        assert!(digits >= 1, "precision must be at least 1");
        let rounded = self.round(digits);
        if rounded.is_zero() {
            return if digits == 1 {
                "0".to_string()
            } else {
                format!("0.{}", "0".repeat(digits as usize - 1))
            };
        }
        let have = rounded.significant_digits();
        let pad = digits as u64 - have;
        let mantissa = rounded.mantissa.abs() * BigInt::from(pow10(pad));
        let exponent = rounded.exponent - pad as i64;
        plain_string(rounded.is_negative(), &mantissa.to_string(), exponent)
    }

    /// Plain positional notation regardless of magnitude.
    pub fn to_plain_string(&self) -> String {
        plain_string(
            self.is_negative(),
            &self.mantissa.abs().to_string(),
            self.exponent,
        )
    }

    fn cmp_magnitude(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match self.adjusted().cmp(&other.adjusted()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Same leading position: the exponent gap is bounded by the digit counts.
        let a = self.mantissa.magnitude();
        let b = other.mantissa.magnitude();
        match self.exponent.cmp(&other.exponent) {
            Ordering::Equal => a.cmp(b),
            Ordering::Greater => (a * pow10((self.exponent - other.exponent) as u64)).cmp(b),
            Ordering::Less => a.cmp(&(b * pow10((other.exponent - self.exponent) as u64))),
        }
    }
}

/// Rounds `mantissa × 10^exponent` half-even to `precision` significant digits.
///
/// `sticky` marks a nonzero remainder below the last mantissa digit (used by division);
/// it only matters when the discarded digits are exactly half an ulp or when they are
/// all zero, so callers must supply at least `precision + 1` digits.
pub(crate) fn round_parts(
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
    sticky: bool,
) -> PrecisionDecimal {
    assert!(precision >= 1, "precision must be at least 1");
    let negative = mantissa.is_negative();
    let magnitude = mantissa.into_parts().1;
    let digits = digit_count(&magnitude);
    if digits <= precision as u64 {
        return PrecisionDecimal::new(BigInt::from_biguint(sign_of(negative), magnitude), exponent);
    }
    let drop = digits - precision as u64;
    let divisor = pow10(drop);
    let (mut kept, rest) = magnitude.div_rem(&divisor);
    let twice = rest << 1usize;
    let round_up = match twice.cmp(&divisor) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => sticky || kept.is_odd(),
    };
    if round_up {
        kept += 1u32;
    }
    PrecisionDecimal::new(
        BigInt::from_biguint(sign_of(negative), kept),
        exponent + drop as i64,
    )
}

fn sign_of(negative: bool) -> Sign {
    if negative {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

fn plain_string(negative: bool, digits: &str, exponent: i64) -> String {
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exponent >= 0 {
        out.push_str(digits);
        out.extend(std::iter::repeat_n('0', exponent as usize));
        return out;
    }
    let frac = (-exponent) as usize;
    if digits.len() > frac {
        let (int_part, frac_part) = digits.split_at(digits.len() - frac);
        out.push_str(int_part);
        out.push('.');
        out.push_str(frac_part);
    } else {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', frac - digits.len()));
        out.push_str(digits);
    }
    out
}

impl fmt::Display for PrecisionDecimal {
    /// Plain notation for moderate magnitudes, otherwise `d.ddde±x` (e.g. `1e-8`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let adjusted = self.adjusted();
        if adjusted >= PLAIN_MIN_ADJUSTED && self.exponent <= PLAIN_MAX_EXPONENT {
            return f.write_str(&self.to_plain_string());
        }
        let digits = self.mantissa.abs().to_string();
        if self.is_negative() {
            f.write_str("-")?;
        }
        let (lead, rest) = digits.split_at(1);
        f.write_str(lead)?;
        if !rest.is_empty() {
            write!(f, ".{rest}")?;
        }
        write!(f, "e{adjusted}")
    }
}

impl fmt::Debug for PrecisionDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrecisionDecimal({self})")
    }
}

impl FromStr for PrecisionDecimal {
    type Err = ParseDecimalError;

    /// Accepts `[+-]digits[.digits][(e|E)[+-]digits]`; at least one mantissa digit.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || ParseDecimalError::Invalid(s.to_string());
        let (body, negative) = match s.as_bytes().first() {
            Some(b'-') => (&s[1..], true),
            Some(b'+') => (&s[1..], false),
            Some(_) => (s, false),
            None => return Err(ParseDecimalError::Empty),
        };
        let (number, exp_part) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], Some(&body[i + 1..])),
            None => (body, None),
        };
        let (int_part, frac_part) = match number.find('.') {
            Some(i) => (&number[..i], &number[i + 1..]),
            None => (number, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(invalid());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let mut exponent: i64 = match exp_part {
            None => 0,
            Some(e) => {
                let digits = e.strip_prefix(['+', '-']).unwrap_or(e);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(invalid());
                }
                let value: i64 = e.parse().map_err(|_| ParseDecimalError::ExponentRange)?;
                if value.abs() > MAX_PARSE_EXPONENT {
                    return Err(ParseDecimalError::ExponentRange);
                }
                value
            }
        };
        exponent -= frac_part.len() as i64;
        let all_digits = format!("{int_part}{frac_part}");
        let magnitude = BigUint::parse_bytes(all_digits.as_bytes(), 10).ok_or_else(invalid)?;
        Ok(Self::new(
            BigInt::from_biguint(sign_of(negative), magnitude),
            exponent,
        ))
    }
}

impl PartialOrd for PrecisionDecimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrecisionDecimal {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.mantissa.sign();
        let sb = other.mantissa.sign();
        let rank = |s: Sign| match s {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        };
        match rank(sa).cmp(&rank(sb)) {
            Ordering::Equal => {}
            ord => return ord,
        }
        match sa {
            Sign::Plus => self.cmp_magnitude(other),
            Sign::Minus => other.cmp_magnitude(self),
            Sign::NoSign => Ordering::Equal,
        }
    }
}

impl From<u64> for PrecisionDecimal {
    fn from(value: u64) -> Self {
        Self::from_integer(value)
    }
}

impl From<i64> for PrecisionDecimal {
    fn from(value: i64) -> Self {
        Self::from_integer(value)
    }
}

impl TryFrom<&PrecisionDecimal> for i64 {
    type Error = Error;

    fn try_from(value: &PrecisionDecimal) -> Result<Self, Self::Error> {
        if value.exponent < 0 {
            return Err(Error::NotAnInteger(value.to_string()));
        }
        let scaled = &value.mantissa * BigInt::from(pow10(value.exponent as u64));
        scaled
            .to_i64()
            .ok_or_else(|| Error::NotAnInteger(value.to_string()))
    }
}

impl serde::Serialize for PrecisionDecimal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for PrecisionDecimal {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> PrecisionDecimal {
        s.parse().unwrap()
    }

    #[test]
    fn normalization_strips_trailing_zeros() {
        let x = PrecisionDecimal::new(2_590_000u64, -6);
        assert_eq!(x.mantissa(), &BigInt::from(259));
        assert_eq!(x.exponent(), -2);
        assert_eq!(x, d("2.59"));
        assert_eq!(d("0.000"), PrecisionDecimal::zero());
        assert_eq!(PrecisionDecimal::new(0, 17).exponent(), 0);
        assert_eq!(d("1e20"), PrecisionDecimal::new(1, 20));
    }

    #[test]
    fn digit_count_at_powers_of_ten() {
        for k in 0..60u64 {
            let p = pow10(k);
            assert_eq!(digit_count(&p), k + 1);
            if k > 0 {
                assert_eq!(digit_count(&(p - 1u32)), k);
            }
        }
        assert_eq!(digit_count(&BigUint::zero()), 1);
    }

    #[test]
    fn half_even_rounding() {
        assert_eq!(d("2.5").round(1), d("2"));
        assert_eq!(d("3.5").round(1), d("4"));
        assert_eq!(d("-2.5").round(1), d("-2"));
        assert_eq!(d("2.51").round(1), d("3"));
        assert_eq!(d("9.96").round(2), d("10"));
        assert_eq!(d("2.5937424601").round(3), d("2.59"));
        assert_eq!(d("0.0012345").round(3), d("0.00123"));
    }

    #[test]
    fn sticky_breaks_ties() {
        let tie = round_parts(BigInt::from(25), 0, 1, false);
        let above = round_parts(BigInt::from(25), 0, 1, true);
        assert_eq!(tie, d("20"));
        assert_eq!(above, d("30"));
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(d("2.5937424601").to_string(), "2.5937424601");
        assert_eq!(d("1e-8").to_string(), "1e-8");
        assert_eq!(d("0.00000001"), d("1e-8"));
        assert_eq!(d("-0.125").to_string(), "-0.125");
        assert_eq!(d("1.4e-8").to_string(), "1.4e-8");
        assert_eq!(d("0.000001").to_string(), "0.000001");
        assert_eq!(d("1000").to_string(), "1000");
        assert_eq!(d("1e21").to_string(), "1e21");
        assert_eq!(d("+.5").to_string(), "0.5");
        assert_eq!(d("5.").to_string(), "5");
        assert_eq!(d("1.2E+3").to_string(), "1200");
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in ["", "-", ".", "e5", "1e", "1e+", "1.2.3", "abc", "1,5", "--1", " 1"] {
            assert!(bad.parse::<PrecisionDecimal>().is_err(), "accepted {bad:?}");
        }
        assert!(matches!(
            "1e9999999999".parse::<PrecisionDecimal>(),
            Err(ParseDecimalError::ExponentRange)
        ));
    }

    #[test]
    fn significant_string_keeps_trailing_zeros() {
        assert_eq!(d("2.5937424601").to_significant_string(3), "2.59");
        assert_eq!(d("2.59").to_significant_string(5), "2.5900");
        assert_eq!(d("2.71828182845").to_significant_string(6), "2.71828");
        assert_eq!(d("0.0001358").to_significant_string(2), "0.00014");
        assert_eq!(d("1250").to_significant_string(2), "1200");
        assert_eq!(PrecisionDecimal::zero().to_significant_string(3), "0.00");
    }

    #[test]
    fn exact_float_conversion() {
        assert_eq!(PrecisionDecimal::from_f64(0.5).unwrap(), d("0.5"));
        assert_eq!(PrecisionDecimal::from_f64(2.0).unwrap(), d("2"));
        assert_eq!(
            PrecisionDecimal::from_f64(0.1).unwrap(),
            d("0.1000000000000000055511151231257827021181583404541015625")
        );
        assert_eq!(PrecisionDecimal::from_f64(-3.0e20).unwrap(), d("-3e20"));
        assert!(PrecisionDecimal::from_f64(f64::NAN).is_none());
        assert_eq!(d("2.5937424601000023").to_f64(), 2.5937424601000023);
        let tiny = PrecisionDecimal::from_f64(f64::MIN_POSITIVE / 4.0).unwrap();
        assert_eq!(tiny.to_f64(), f64::MIN_POSITIVE / 4.0);
    }

    #[test]
    fn ordering_across_exponents() {
        assert!(d("2.59") < d("2.6"));
        assert!(d("-1") < d("0"));
        assert!(d("-2") < d("-1.5"));
        assert!(d("1e-100") > PrecisionDecimal::zero());
        assert!(d("100") > d("99.99999"));
        assert_eq!(d("1.10").cmp(&d("1.1")), Ordering::Equal);
    }

    #[test]
    fn integer_conversion() {
        assert_eq!(i64::try_from(&d("1.2e3")).unwrap(), 1200);
        assert!(i64::try_from(&d("1.5")).is_err());
    }
}
