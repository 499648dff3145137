//! Exact rational helpers on top of [`num_rational::BigRational`].

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    let exp = i32::try_from(exp).expect("exponent fits in i32");
    base.pow(exp)
}

/// Returns `1/beta` when it is an integer.
pub fn integer_reciprocal(beta: &Rational) -> Option<BigInt> {
    if beta.numer().is_one() {
        Some(beta.denom().clone())
    } else {
        None
    }
}

/// Parses `a/b` or a bare integer.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().ok()?;
    let denom: BigInt = denom.parse().ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

/// Always renders `numer/denom`, including integers (`0/1`).
pub fn fraction(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Fixed-point decimal with `places` digits, rounding half away from zero.
///
/// The only lossy conversion in the crate; used for output coordinates.
pub fn to_decimal(value: &Rational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = value.abs() * Rational::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let frac = &scaled - Rational::from_integer(floor.clone());
    let rounded = if frac * BigInt::from(2) >= Rational::one() {
        floor + 1
    } else {
        floor
    };
    let (whole, part) = rounded.div_rem(&scale);
    let mut out = String::new();
    if value.is_negative() && !rounded_is_zero(&whole, &part) {
        out.push('-');
    }
    write!(out, "{whole}").unwrap();
    if places > 0 {
        write!(out, ".{:0>width$}", part.to_string(), width = places).unwrap();
    }
    out
}

fn rounded_is_zero(whole: &BigInt, part: &BigInt) -> bool {
    whole.is_zero() && part.is_zero()
}

pub(crate) fn check_beta(beta: &Rational) -> Result<()> {
    if beta.is_positive() && beta < &Rational::one() {
        Ok(())
    } else {
        Err(Error::BetaOutOfRange(beta.clone()))
    }
}

/// Least common multiple of two positive integers.
pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("8/15"), Some(ratio(8, 15)));
        assert_eq!(parse_rational(" -2 / 4 "), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("3"), Some(int(3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(to_decimal(&ratio(1, 3), 6), "0.333333");
        assert_eq!(to_decimal(&ratio(2, 3), 6), "0.666667");
        assert_eq!(to_decimal(&ratio(1, 2), 0), "1");
        assert_eq!(to_decimal(&ratio(-1, 8), 2), "-0.13");
        assert_eq!(to_decimal(&ratio(-1, 10_000_000), 6), "0.000000");
        assert_eq!(to_decimal(&int(600), 6), "600.000000");
    }

    #[test]
    fn fraction_always_has_denominator() {
        assert_eq!(fraction(&int(0)), "0/1");
        assert_eq!(fraction(&ratio(-4, 6)), "-2/3");
    }
}
