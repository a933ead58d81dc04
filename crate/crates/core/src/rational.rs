//! Exact rational scalars and their text syntax.
//!
//! Literals are either an integer (`-3`) or a fraction (`-3/4`). There is no
//! floating-point syntax. Output always uses the canonical reduced form with a
//! positive denominator, omitting `/1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses `p`, `-p`, `p/q` or `-p/q`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidLiteral(text.to_string());
    match text.split_once('/') {
        None => parse_integer(text)
            .map(Rational::from_integer)
            .ok_or_else(bad),
        Some((num, den)) => {
            let num = parse_integer(num).ok_or_else(bad)?;
            if den.starts_with('-') {
                return Err(bad());
            }
            let den = parse_integer(den).ok_or_else(bad)?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
    }
}

pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}
