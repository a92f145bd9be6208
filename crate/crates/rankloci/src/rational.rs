//! Exact rational scalars.
//!
//! `Rational` is `num`'s arbitrary-precision rational, which already keeps
//! values reduced (gcd of numerator and denominator is 1) with a positive
//! denominator. The helpers here cover the `p/q` text form used by every
//! JSON surface of the crate.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};

pub type Rational = BigRational;

/// Parses `p`, `-p`, or `p/q` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| RationalParseError(s.to_string()))?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| RationalParseError(s.to_string()))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(RationalParseError(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// Canonical `p/q` form; integers print without the denominator.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct RationalParseError(pub String);

pub fn rat_from_i64(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// True when the value is in canonical reduced form. `num` maintains this
/// on every operation; tests audit it on values that cross module borders.
pub fn is_canonical(r: &Rational) -> bool {
    if r.numer().is_zero() {
        return r.denom().is_one();
    }
    r.denom().sign() == Sign::Plus
        && num::Integer::gcd(&r.numer().abs(), &r.denom().abs()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7", "2/3", "-10/4", "0"] {
            let r = parse_rational(s).unwrap();
            assert!(is_canonical(&r));
            let back = parse_rational(&format_rational(&r)).unwrap();
            assert_eq!(r, back);
        }
        assert_eq!(format_rational(&parse_rational("-10/4").unwrap()), "-5/2");
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
