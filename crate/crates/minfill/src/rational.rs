//! Exact rational numbers and their text forms.
//!
//! Every quantity in this crate (distances, edge weights, LP tableaux) is an
//! arbitrary-precision rational. Interfaces accept integers (`"3"`), decimal
//! strings (`"1.5"`, converted exactly) and fractions (`"7/2"`), and always
//! serialize back to the shortest exact form (`"7"`, `"3/2"`).

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationalParseError {
    #[error("empty number")]
    Empty,
    #[error("invalid number `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parse an integer, exact decimal (optionally with an exponent) or `p/q` fraction.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let numer = parse_decimal(num).map_err(|_| RationalParseError::Invalid(text.into()))?;
        let denom = parse_decimal(den).map_err(|_| RationalParseError::Invalid(text.into()))?;
        if denom.is_zero() {
            return Err(RationalParseError::ZeroDenominator(text.into()));
        }
        return Ok(numer / denom);
    }
    parse_decimal(s).map_err(|_| RationalParseError::Invalid(text.into()))
}

/// Decimal with optional sign, fractional part and exponent: `-12`, `1.5`, `2.5e3`.
fn parse_decimal(text: &str) -> Result<Rational, ()> {
    let s = text.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| ())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(());
    }
    let joined: String = [int_part, frac_part].concat();
    let numer: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined.parse().map_err(|_| ())?
    };
    let scale = frac_part.len() as i64;
    let mut value = Rational::from_integer(numer * BigInt::from(sign));
    let shift = exponent - scale;
    let ten = BigInt::from(10);
    if shift > 0 {
        value *= Rational::from_integer(ten.pow(shift as u32));
    } else if shift < 0 {
        value /= Rational::from_integer(ten.pow((-shift) as u32));
    }
    Ok(value)
}

/// Shortest exact form: `"7"` for integers, `"3/2"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Read a rational out of a JSON value (number or string).
pub fn rational_from_json(value: &serde_json::Value) -> Result<Rational, RationalParseError> {
    match value {
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(RationalParseError::Invalid(other.to_string())),
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_negative(value: &Rational) -> bool {
    value.is_negative()
}
