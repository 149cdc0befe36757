//! Exact rational arithmetic.
//!
//! Every geometric predicate in this crate is decided over arbitrary-precision
//! rationals; no floating point enters any membership test or threshold
//! comparison. `Rational` wraps [`num_rational::BigRational`] and fixes the
//! wire format: JSON as `{"num": "...", "den": "..."}` with both parts as
//! decimal strings, text as `"p/q"` (or `"p"` for integers).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// An exact rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `num/den`. Panics if `den == 0`; use [`Rational::from_str`] for
    /// untrusted input.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigint(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(Rational(BigRational::new(num, den)))
        }
    }

    /// `base^exp` with an integer base; `exp` may be negative.
    pub fn pow(base: i64, exp: i32) -> Self {
        assert!(base != 0 || exp >= 0, "0 to a negative power");
        let mag = BigInt::from(base).pow(exp.unsigned_abs());
        if exp >= 0 {
            Rational(BigRational::from_integer(mag))
        } else {
            Rational(BigRational::new(BigInt::one(), mag))
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn floor_bigint(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil_bigint(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn floor_i64(&self) -> Option<i64> {
        self.floor_bigint().to_i64()
    }

    pub fn ceil_i64(&self) -> Option<i64> {
        self.ceil_bigint().to_i64()
    }

    /// Nearest `f64`, for reporting only. Never used in predicates.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn cmp_i64(&self, rhs: i64) -> Ordering {
        self.0.cmp(&BigRational::from_integer(BigInt::from(rhs)))
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<usize> for Rational {
    fn from(v: usize) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational(BigRational::from_integer(v))
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
impl_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

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
        write!(f, "{self}")
    }
}

/// Error parsing a rational from text or JSON.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("invalid integer part {0:?}")]
    BadInteger(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("expected \"p\" or \"p/q\", got {0:?}")]
    BadShape(String),
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse_int = |t: &str| {
            BigInt::from_str(t.trim()).map_err(|_| ParseRationalError::BadInteger(t.to_string()))
        };
        match s.split('/').collect::<Vec<_>>()[..] {
            [n] => Ok(Rational(BigRational::from_integer(parse_int(n)?))),
            [n, d] => {
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator);
                }
                Ok(Rational(BigRational::new(parse_int(n)?, den)))
            }
            _ => Err(ParseRationalError::BadShape(s.to_string())),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: String,
            den: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let num = BigInt::from_str(&raw.num)
            .map_err(|_| D::Error::custom(format!("bad numerator {:?}", raw.num)))?;
        let den = BigInt::from_str(&raw.den)
            .map_err(|_| D::Error::custom(format!("bad denominator {:?}", raw.den)))?;
        Rational::from_bigint(num, den).ok_or_else(|| D::Error::custom("zero denominator"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_ordering() {
        let a = Rational::new(3, 8);
        let b = Rational::new(1, 4) + Rational::new(2, 16);
        assert_eq!(a, b);
        assert!(Rational::new(1, 3) < Rational::new(1, 2));
        assert_eq!(Rational::pow(4, -2), Rational::new(1, 16));
        assert_eq!(Rational::new(2, 4), Rational::new(1, 2));
        assert_eq!((Rational::new(7, 2)).recip(), Rational::new(2, 7));
    }

    #[test]
    fn floors_and_ceils() {
        assert_eq!(Rational::new(7, 2).floor_i64(), Some(3));
        assert_eq!(Rational::new(7, 2).ceil_i64(), Some(4));
        assert_eq!(Rational::new(-7, 2).floor_i64(), Some(-4));
        assert_eq!(Rational::from(5i64).floor_i64(), Some(5));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3/4".parse::<Rational>().unwrap(), Rational::new(3, 4));
        assert_eq!("-2".parse::<Rational>().unwrap(), Rational::from(-2i64));
        assert_eq!("6/8".parse::<Rational>().unwrap().to_string(), "3/4");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert!("1/2/3".parse::<Rational>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let v = Rational::new(-35, 14);
        let js = serde_json::to_string(&v).unwrap();
        assert_eq!(js, r#"{"num":"-5","den":"2"}"#);
        let back: Rational = serde_json::from_str(&js).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<Rational>(r#"{"num":"1","den":"0"}"#).is_err());
    }
}
