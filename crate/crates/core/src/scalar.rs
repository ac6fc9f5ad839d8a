//! Scalar types usable as probabilities.
//!
//! Marginals are always held exactly (as [`BigRational`]); solvers are generic
//! over [`Probability`] and convert each marginal once via
//! [`Probability::from_exact`]. Exact mode uses `BigRational`, float mode uses
//! `f64` (or `f32`).

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Probability:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Short name of the arithmetic mode, used in output records.
    const MODE: &'static str;

    fn from_exact(value: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    /// `1 - self`.
    fn complement(&self) -> Self {
        Self::one() - self.clone()
    }
}

impl Probability for f64 {
    const MODE: &'static str = "float";

    fn from_exact(value: &BigRational) -> Self {
        ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Probability for f32 {
    const MODE: &'static str = "float32";

    fn from_exact(value: &BigRational) -> Self {
        ToPrimitive::to_f32(value).unwrap_or(f32::NAN)
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl Probability for BigRational {
    const MODE: &'static str = "rational";

    fn from_exact(value: &BigRational) -> Self {
        value.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Parses a probability literal: a decimal (`0.8`, `1`, `.25`) or a fraction (`3/8`).
///
/// Range is not checked here.
pub fn parse_exact(text: &str) -> Option<BigRational> {
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.parse().ok()?;
        let den: BigInt = den.parse().ok()?;
        if den.is_zero() || num.is_negative() || den.is_negative() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(BigRational::new(num, den))
}

/// Formats an exact value as a terminating decimal when one exists
/// (denominator of the form 2^i 5^j), otherwise as `n/d`.
pub fn format_exact(value: &BigRational) -> String {
    let mut den = value.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let places = twos.max(fives);
    let scaled = value * BigRational::from_integer(BigInt::from(10).pow(places));
    let digits = scaled.to_integer().abs().to_string();
    let sign = if value.is_negative() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{digits}");
    }
    let places = places as usize;
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    format!("{sign}{int_part}.{frac_part}")
}

/// Formats a non-negative exact value with `sig` significant digits in plain
/// decimal notation, rounding half up. Values below 1e-6 use scientific notation.
pub fn format_significant(value: &BigRational, sig: usize) -> String {
    assert!(sig > 0);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let v = value.abs();
    let ten = BigRational::from_integer(BigInt::from(10));
    // exponent e with 10^e <= v < 10^(e+1)
    let mut exp: i64 = 0;
    let mut probe = v.clone();
    while probe >= ten {
        probe /= &ten;
        exp += 1;
    }
    while probe < BigRational::one() {
        probe *= &ten;
        exp -= 1;
    }
    let shift = sig as i64 - 1 - exp;
    let scale = BigInt::from(10).pow(shift.unsigned_abs() as u32);
    let scaled = if shift >= 0 {
        &v * BigRational::from_integer(scale)
    } else {
        &v / BigRational::from_integer(scale)
    };
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut mantissa = (scaled + half).floor().to_integer();
    if mantissa.to_string().len() > sig {
        // rounding carried into a new digit
        mantissa /= BigInt::from(10);
        exp += 1;
    }
    let digits = mantissa.to_string();
    let sign = if negative { "-" } else { "" };
    if exp < -6 {
        let (head, tail) = digits.split_at(1);
        return format!("{sign}{head}.{tail}e{exp}");
    }
    let point = exp + 1;
    if point <= 0 {
        format!("{sign}0.{}{digits}", "0".repeat((-point) as usize))
    } else if point as usize >= digits.len() {
        format!("{sign}{digits}{}", "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{sign}{a}.{b}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_exact("0.8"), Some(r(4, 5)));
        assert_eq!(parse_exact("1"), Some(r(1, 1)));
        assert_eq!(parse_exact(".25"), Some(r(1, 4)));
        assert_eq!(parse_exact("0.027"), Some(r(27, 1000)));
        assert_eq!(parse_exact("3/9"), Some(r(1, 3)));
        assert_eq!(parse_exact("1.0"), Some(r(1, 1)));
        assert_eq!(parse_exact(""), None);
        assert_eq!(parse_exact("."), None);
        assert_eq!(parse_exact("-0.5"), None);
        assert_eq!(parse_exact("0.5x"), None);
        assert_eq!(parse_exact("1/0"), None);
    }

    #[test]
    fn formats_terminating_and_repeating() {
        assert_eq!(format_exact(&r(4, 5)), "0.8");
        assert_eq!(format_exact(&r(1, 1)), "1");
        assert_eq!(format_exact(&r(27, 1000)), "0.027");
        assert_eq!(format_exact(&r(1, 3)), "1/3");
        assert_eq!(format_exact(&r(1, 8)), "0.125");
        assert_eq!(format_exact(&r(0, 1)), "0");
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(&r(18, 25), 15), "0.720000000000000");
        assert_eq!(format_significant(&r(1, 3), 15), "0.333333333333333");
        assert_eq!(format_significant(&r(2, 3), 3), "0.667");
        assert_eq!(format_significant(&r(1, 1), 15), "1.00000000000000");
        assert_eq!(format_significant(&r(999999, 1000000), 3), "1.00");
        assert_eq!(format_significant(&r(7, 1_000_000_000), 2), "7.0e-9");
        assert_eq!(format_significant(&r(0, 1), 15), "0");
    }

    #[test]
    fn float_conversion_is_from_exact_value() {
        assert_eq!(<f64 as Probability>::from_exact(&r(4, 5)), 0.8);
        assert_eq!(<f64 as Probability>::from_exact(&r(1, 10)), 0.1);
        assert_eq!(r(3, 10).complement(), r(7, 10));
    }
}
