//! Exact rational numbers.
//!
//! [`Rational`] is a thin newtype over [`BigRational`] that pins down the
//! textual form used everywhere in this crate: always `p/q`, reduced, with
//! `q >= 1` (so zero is `0/1` and one is `1/1`).

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact, always-reduced fraction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    /// Panicking constructor for literals known to be valid.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).expect("nonzero denominator")
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn half() -> Self {
        Self::frac(1, 2)
    }

    pub fn two_thirds() -> Self {
        Self::frac(2, 3)
    }

    /// `k / 2^e`.
    pub fn dyadic(k: impl Into<BigInt>, e: u32) -> Self {
        let k = k.into();
        let Some(tz) = k.trailing_zeros() else {
            return Rational(BigRational::zero());
        };
        let shift = e.min(tz.min(u32::MAX as u64) as u32);
        Rational(BigRational::new_raw(k >> shift, BigInt::one() << (e - shift)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `self - floor(self)`, always in `[0, 1)`.
    pub fn fract(&self) -> Self {
        Rational(&self.0 - self.0.floor())
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn pow(&self, e: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), e as usize))
    }

    pub fn in_unit_interval(&self) -> bool {
        !self.is_negative() && self.0 <= BigRational::one()
    }

    /// Checks `0 <= self <= 1`.
    pub fn ensure_unit(&self, what: &str) -> Result<()> {
        if self.in_unit_interval() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} = {self} is outside [0, 1]")))
        }
    }

    /// Nearest `f64`; exact for values representable in double precision.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// If the denominator is a power of two, returns its exponent.
    pub fn dyadic_exponent(&self) -> Option<u32> {
        let d = self.denom();
        let bits = d.bits();
        if bits == 0 {
            return None;
        }
        let e = (bits - 1) as u32;
        if *d == BigInt::one() << e {
            Some(e)
        } else {
            None
        }
    }

    pub fn cmp_exact(&self, other: &Rational) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q` or a bare integer `p`. No decimal points.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed rational {s:?}, expected p/q"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational(self.0.$m(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational((&self.0).$m(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor, like the integer types; use `checked_div` or
// `rat_arith` where the divisor is untrusted.
forward_binop!(Div, div);

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

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Cmp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithResult {
    Value(Rational),
    Ordering(Ordering),
}

/// Single entry point for the five exact operations.
pub fn rat_arith(a: &Rational, b: &Rational, op: ArithOp) -> Result<ArithResult> {
    Ok(match op {
        ArithOp::Add => ArithResult::Value(a + b),
        ArithOp::Sub => ArithResult::Value(a - b),
        ArithOp::Mul => ArithResult::Value(a * b),
        ArithOp::Div => ArithResult::Value(a.checked_div(b)?),
        ArithOp::Cmp => ArithResult::Ordering(a.cmp(b)),
    })
}

/// `gcd(|p|, q) == 1` and `q >= 1`; holds for every value this module builds.
pub fn is_reduced(r: &Rational) -> bool {
    r.denom() >= &BigInt::one() && r.numer().gcd(r.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(
            rat_arith(&r("1/3"), &r("1/6"), ArithOp::Add).unwrap(),
            ArithResult::Value(r("1/2"))
        );
        let z = rat_arith(&r("5/6"), &r("5/6"), ArithOp::Sub).unwrap();
        assert_eq!(z, ArithResult::Value(Rational::zero()));
        if let ArithResult::Value(z) = z {
            assert_eq!(z.to_string(), "0/1");
        }
        assert_eq!(
            rat_arith(&r("2/3"), &r("5/8"), ArithOp::Cmp).unwrap(),
            ArithResult::Ordering(Ordering::Greater)
        );
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            rat_arith(&r("1/3"), &Rational::zero(), ArithOp::Div),
            Err(Error::DivisionByZero)
        ));
        assert!(matches!("1/0".parse::<Rational>(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn parse_and_display_are_reduced() {
        assert_eq!(r("4/8").to_string(), "1/2");
        assert_eq!(r("-6/-9").to_string(), "2/3");
        assert_eq!(r("3/-9").to_string(), "-1/3");
        assert_eq!(r("7").to_string(), "7/1");
        assert!("0.5".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
    }

    #[test]
    fn dyadic_exponent() {
        assert_eq!(r("3/8").dyadic_exponent(), Some(3));
        assert_eq!(r("5").dyadic_exponent(), Some(0));
        assert_eq!(r("1/6").dyadic_exponent(), None);
    }

    #[test]
    fn fract_and_floor() {
        assert_eq!(r("7/2").floor(), BigInt::from(3));
        assert_eq!(r("7/2").fract(), r("1/2"));
        assert_eq!(r("-1/3").fract(), r("2/3"));
    }

    #[test]
    fn serde_uses_p_over_q() {
        let json = serde_json::to_string(&r("2/6")).unwrap();
        assert_eq!(json, "\"1/3\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r("1/3"));
    }
}
