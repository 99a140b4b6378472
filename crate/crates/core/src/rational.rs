//! Exact rational numbers used for every probability value.
//!
//! Values are `num_rational::BigRational`, which keeps numerator and
//! denominator in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`. Whitespace around the parts is ignored.
pub fn parse(text: &str) -> Result<Rational> {
    let bad = || Error::Format(format!("not a rational: `{text}`"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Renders as `"p/q"`, or `"p"` when the denominator is 1.
pub fn format(value: &Rational) -> String {
    value.to_string()
}

pub fn in_unit_interval(value: &Rational) -> bool {
    *value >= zero() && *value <= one()
}

/// True if the value is exactly 0 or exactly 1.
pub fn is_sharp(value: &Rational) -> bool {
    value.is_zero() || value.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse(" 3 ").unwrap(), int(3));
        assert_eq!(parse("-1/3").unwrap(), ratio(-1, 3));
        assert_eq!(format(&ratio(6, 3)), "2");
        assert_eq!(format(&ratio(1, 8)), "1/8");
        assert!(parse("1/0").is_err());
        assert!(parse("0.5").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn unit_interval() {
        assert!(in_unit_interval(&zero()));
        assert!(in_unit_interval(&one()));
        assert!(!in_unit_interval(&ratio(5, 4)));
        assert!(!in_unit_interval(&ratio(-1, 4)));
        assert!(is_sharp(&one()) && !is_sharp(&ratio(1, 2)));
    }
}
