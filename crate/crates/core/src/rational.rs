//! Exact rational scalars.
//!
//! Every distance in the crate is a [`Rational`]. Equality and ordering are
//! exact, which the structural tests depend on: two pairs lie in the same
//! fiber only when their distances are *equal*, never "close".

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

/// An arbitrary-precision rational number kept in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `numer / denom`, reducing to lowest terms.
    ///
    /// Panics when `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}

/// Canonical wire form: `p/q` in lowest terms, `/q` omitted when `q == 1`.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Accepts an optional sign, an integer, and an optional `/` followed by a
/// positive integer. Whitespace is not permitted inside the literal.
impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let (negative, body) = match s.as_bytes()[0] {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let (num_str, den_str) = match body.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (body, None),
        };
        if !is_digits(num_str) || den_str.is_some_and(|d| !is_digits(d)) {
            return Err(ParseRationalError::Malformed(s.to_string()));
        }
        let mut numer: BigInt = num_str
            .parse()
            .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
        if negative {
            numer = -numer;
        }
        let denom: BigInt = match den_str {
            Some(d) => d
                .parse()
                .map_err(|_| ParseRationalError::Malformed(s.to_string()))?,
            None => BigInt::from(1),
        };
        if denom.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_wire_forms() {
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from(7));
        assert_eq!("+3/6".parse::<Rational>().unwrap(), Rational::new(1, 2));
        assert_eq!("-4/2".parse::<Rational>().unwrap(), Rational::from(-2));
        assert_eq!("0/5".parse::<Rational>().unwrap(), Rational::zero());
    }

    #[test]
    fn rejects_bad_literals() {
        for bad in ["", "1/", "/2", "1.5", "a", "1/-2", " 1", "--1", "1/2/3"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should not parse");
        }
        assert_eq!(
            "3/0".parse::<Rational>(),
            Err(ParseRationalError::ZeroDenominator("3/0".into()))
        );
    }

    #[test]
    fn canonical_display() {
        assert_eq!(Rational::new(6, 4).to_string(), "3/2");
        assert_eq!(Rational::new(10, 5).to_string(), "2");
        assert_eq!(Rational::new(-1, 3).to_string(), "-1/3");
        assert_eq!(Rational::new(2, -6).to_string(), "-1/3");
    }

    #[test]
    fn lowest_terms_invariant() {
        let r = Rational::new(-84, 36);
        assert_eq!(r.numer(), &BigInt::from(-7));
        assert_eq!(r.denom(), &BigInt::from(3));
    }

    #[test]
    fn exact_ordering() {
        let third = Rational::new(1, 3);
        assert!(&(&third + &third) + &third == Rational::from(1));
        assert!(Rational::new(1, 3) < Rational::new(334, 1000));
    }

    #[test]
    fn huge_values_stay_exact() {
        let big: Rational = "123456789012345678901234567890/7".parse().unwrap();
        assert_eq!(big.to_string().parse::<Rational>().unwrap(), big);
    }
}
