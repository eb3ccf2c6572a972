//! Exact rational scalars and their text forms.
//!
//! Every probability, hazard increment, and martingale value in this crate is
//! a [`Rat`] (an arbitrary-precision rational), so identities such as the
//! martingale property or the product rule for survival functions can be
//! asserted with `==` instead of a floating-point tolerance. Floats appear
//! only at two boundaries: display (12 significant digits next to the exact
//! `num/den` form) and Monte-Carlo sampling/aggregation.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;

/// Number of significant digits used for the decimal rendering of rationals.
pub const DISPLAY_SIG_DIGITS: usize = 12;

/// Largest decimal exponent accepted when parsing scientific notation.
const MAX_PARSE_EXPONENT: i64 = 10_000;

/// Builds `numer / denom` from machine integers.
///
/// # Panics
/// Panics when `denom == 0`; intended for literals in code and tests.
pub fn rat(numer: i64, denom: i64) -> Rat {
    assert!(denom != 0, "rational literal with zero denominator");
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Builds the integer `n` as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"a/b"`, an integer, or a decimal (optionally with an exponent,
/// e.g. `"2.5e-1"`) into an exact rational.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::ParseNumber {
            input: text.to_string(),
            reason: "empty string".to_string(),
        });
    }
    if let Some((numer, denom)) = trimmed.split_once('/') {
        let parse_int = |part: &str, what: &str| -> Result<BigInt> {
            part.trim().parse::<BigInt>().map_err(|_| Error::ParseNumber {
                input: text.to_string(),
                reason: format!("invalid {what} in fraction"),
            })
        };
        let numer = parse_int(numer, "numerator")?;
        let denom = parse_int(denom, "denominator")?;
        if denom.is_zero() {
            return Err(Error::ParseNumber {
                input: text.to_string(),
                reason: "zero denominator".to_string(),
            });
        }
        return Ok(Rat::new(numer, denom));
    }
    parse_decimal(trimmed).ok_or_else(|| Error::ParseNumber {
        input: text.to_string(),
        reason: "expected an integer, decimal, or num/den fraction".to_string(),
    })
}

/// Parses decimal notation (`"3"`, `"-1.25"`, `"2.5e-3"`) exactly.
fn parse_decimal(text: &str) -> Option<Rat> {
    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (text, 0),
    };
    if exponent.abs() > MAX_PARSE_EXPONENT {
        return None;
    }
    let (mantissa, negative) = match mantissa.strip_prefix('-') {
        Some(rest) => (rest, true),
        None => (mantissa.strip_prefix('+').unwrap_or(mantissa), false),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let value: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = frac_part.len() as i64 - exponent;
    let result = if scale >= 0 {
        Rat::new(value, pow10(scale as u32))
    } else {
        Rat::from_integer(value * pow10((-scale) as u32))
    };
    Some(if negative { -result } else { result })
}

fn pow10(exp: u32) -> BigInt {
    BigInt::from(10u8).pow(exp)
}

/// Renders `a/b`, or just `a` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a decimal approximation with [`DISPLAY_SIG_DIGITS`] significant
/// digits, trimming trailing zeros (`1/2` becomes `"0.5"`).
pub fn format_decimal(r: &Rat) -> String {
    let v = to_f64(r);
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sig = DISPLAY_SIG_DIGITS as i32;
    let exp = v.abs().log10().floor() as i32;
    if exp < -4 || exp >= sig {
        trim_exponent_zeros(&format!("{:.*e}", (sig - 1) as usize, v))
    } else {
        let decimals = (sig - 1 - exp).max(0) as usize;
        trim_fraction_zeros(&format!("{v:.decimals$}"))
    }
}

fn trim_fraction_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

fn trim_exponent_zeros(s: &str) -> String {
    match s.split_once('e') {
        Some((mantissa, exp)) => format!("{}e{}", trim_fraction_zeros(mantissa), exp),
        None => s.to_string(),
    }
}

/// Converts to `f64`, saturating to signed infinity on overflow.
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact and approximate renderings of one rational, as embedded in JSON
/// reports (`{"rat": "1/2", "dec": 0.5}`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatDisplay {
    pub rat: String,
    pub dec: f64,
}

impl From<&Rat> for RatDisplay {
    fn from(r: &Rat) -> Self {
        RatDisplay {
            rat: format_rat(r),
            dec: to_f64(r),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rat("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rat(" -3/9 ").unwrap(), rat(-1, 3));
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert_eq!(parse_rat("2.5").unwrap(), rat(5, 2));
        assert_eq!(parse_rat("0.1").unwrap(), rat(1, 10));
        assert_eq!(parse_rat(".25").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("25e-2").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("1.5E2").unwrap(), rat_int(150));
        assert_eq!(parse_rat("-0.75").unwrap(), rat(-3, 4));
    }

    #[test]
    fn rejects_malformed_numbers() {
        for bad in ["", "abc", "1/0", "1//2", "1.2.3", "2e", "--1", "1e999999"] {
            assert!(parse_rat(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn formats_fractions() {
        assert_eq!(format_rat(&rat(1, 2)), "1/2");
        assert_eq!(format_rat(&rat(-4, 2)), "-2");
        assert_eq!(format_rat(&rat_int(0)), "0");
    }

    #[test]
    fn formats_decimals_with_significant_digits() {
        assert_eq!(format_decimal(&rat(1, 2)), "0.5");
        assert_eq!(format_decimal(&rat_int(0)), "0");
        assert_eq!(format_decimal(&rat_int(150)), "150");
        assert_eq!(format_decimal(&rat(1, 3)), "0.333333333333");
        assert_eq!(format_decimal(&rat(-1, 4)), "-0.25");
        assert_eq!(format_decimal(&rat(1, 10_000)), "0.0001");
        assert_eq!(format_decimal(&rat(1, 100_000)), "1e-5");
        assert_eq!(format_decimal(&rat(1, 10_000_000)), "1e-7");
    }

    #[test]
    fn display_pair_carries_both_forms() {
        let d = RatDisplay::from(&rat(3, 4));
        assert_eq!(d.rat, "3/4");
        assert_eq!(d.dec, 0.75);
    }
}
