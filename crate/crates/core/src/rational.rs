//! Exact rational numbers.
//!
//! Every probability, measure, payoff and price in the crate is a
//! [`Rational`]. The type is an arbitrary-precision fraction kept in lowest
//! terms with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::Error;

pub type Rational = BigRational;

/// Shorthand constructor used throughout the crate and its tests.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p/q`, an integer, or a plain decimal such as `0.65`.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let text = text.trim();
    let bad = || Error::InvalidNumber(text.to_string());
    if text.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    let num: BigInt = text.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(num))
}

/// Exact `p/q` rendering (integers print without a denominator).
pub fn format_exact(value: &Rational) -> String {
    value.to_string()
}

/// Decimal expansion with at most `sig_digits` significant digits.
///
/// Non-terminating or longer expansions are truncated (not rounded) and
/// marked with a trailing `...`.
pub fn format_decimal(value: &Rational, sig_digits: usize) -> String {
    let negative = value.is_negative();
    let abs = value.abs();
    let numer = abs.numer().clone();
    let denom = abs.denom().clone();
    let (int_part, mut rem) = numer.div_rem(&denom);

    let int_digits = if int_part.is_zero() {
        String::new()
    } else {
        int_part.to_string()
    };
    let mut significant = int_digits.len();
    let mut frac = String::new();
    let ten = BigInt::from(10);
    let mut started = !int_digits.is_empty();
    while !rem.is_zero() && significant < sig_digits {
        rem *= &ten;
        let (digit, r) = rem.div_rem(&denom);
        rem = r;
        let digit = digit.to_string();
        if digit != "0" {
            started = true;
        }
        if started {
            significant += 1;
        }
        frac.push_str(&digit);
    }
    let truncated = !rem.is_zero();

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if int_digits.is_empty() {
        out.push('0');
    } else {
        out.push_str(&int_digits);
    }
    if !frac.is_empty() {
        out.push('.');
        out.push_str(&frac);
    }
    if truncated {
        out.push_str("...");
    }
    out
}

/// `p/q (decimal)` rendering used by text reports.
pub fn format_both(value: &Rational) -> String {
    let exact = format_exact(value);
    let decimal = format_decimal(value, 20);
    if exact == decimal {
        exact
    } else {
        format!("{exact} ({decimal})")
    }
}

pub(crate) fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_numeral_forms() {
        assert_eq!(parse_rational("91/300").unwrap(), rat(91, 300));
        assert_eq!(parse_rational("-4/8").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("15").unwrap(), int(15));
        assert_eq!(parse_rational("0.65").unwrap(), rat(13, 20));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(&rat(367, 5), 20), "73.4");
        assert_eq!(format_decimal(&rat(1, 3), 5), "0.33333...");
        assert_eq!(format_decimal(&rat(-1, 8), 20), "-0.125");
        assert_eq!(format_decimal(&rat(1, 1000), 2), "0.001");
        assert_eq!(format_decimal(&int(0), 20), "0");
        assert_eq!(format_both(&rat(58, 5)), "58/5 (11.6)");
        assert_eq!(format_both(&int(15)), "15");
    }

    #[test]
    fn exact_round_trip_through_text() {
        for v in [rat(20, 3), rat(-7, 12), int(0), rat(559, 700)] {
            assert_eq!(parse_rational(&format_exact(&v)).unwrap(), v);
        }
    }
}
