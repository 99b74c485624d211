//! Exact rational arithmetic: dense matrices and multivariate polynomials over ℚ.
//!
//! Everything in [`crate::liecore`] and [`crate::orbit`] is computed with these
//! types, so algebraic identities are checked with zero tolerance.

mod matrix;
mod poly;

pub use matrix::QMatrix;
pub use poly::Poly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> Result<Q> {
    Q::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
}

/// Parses `"p/q"`, `"-p"` or a decimal literal such as `"0.25"` into an exact rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse()
                .map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?
        };
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_val: BigInt = frac.parse().unwrap();
        let mag = Q::from_integer(int_part.abs()) + Q::new(frac_val, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational literal {s:?}")))?;
    Ok(Q::from_integer(n))
}

/// Canonical text form `p/q` (or `p` for integers).
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn factorial(k: usize) -> Q {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    Q::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_q("3/6").unwrap(), qfrac(1, 2));
        assert_eq!(parse_q("-7").unwrap(), q(-7));
        assert_eq!(parse_q("0.25").unwrap(), qfrac(1, 4));
        assert_eq!(parse_q("-1.5").unwrap(), qfrac(-3, 2));
        assert_eq!(parse_q("-0.5").unwrap(), qfrac(-1, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert!(parse_q("").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_q(&qfrac(2, 4)), "1/2");
        assert_eq!(format_q(&q(-3)), "-3");
    }

    #[test]
    fn float_conversion_is_exact() {
        assert_eq!(from_f64(0.375).unwrap(), qfrac(3, 8));
        assert!(from_f64(f64::NAN).is_err());
    }
}
