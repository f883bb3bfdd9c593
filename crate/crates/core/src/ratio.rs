//! Exact rational numbers and circuit positions.
//!
//! Every quantity in the engine (miles, days, ration fractions, inequality
//! coefficients) is a [`Ratio`]. The textual form is `p/q` with `q` omitted
//! when it is 1; mixed numbers and decimals are not accepted.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Ratio(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRatioError {
    #[error("empty rational")]
    Empty,
    #[error("malformed rational `{0}` (expected `p` or `p/q`)")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl Ratio {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Ratio(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: i64) -> Self {
        Ratio(BigRational::from_integer(n.into()))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Ratio(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        Ratio(BigRational::zero())
    }

    pub fn one() -> Self {
        Ratio(BigRational::one())
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Ratio(self.0.abs())
    }

    pub fn floor(&self) -> Self {
        Ratio(self.0.floor())
    }

    pub fn ceil(&self) -> Self {
        Ratio(self.0.ceil())
    }

    pub fn recip(&self) -> Self {
        Ratio(self.0.recip())
    }

    /// Euclidean remainder: the unique `x` in `[0, m)` with `self ≡ x (mod m)`.
    pub fn rem_euclid(&self, m: &Ratio) -> Ratio {
        assert!(m.is_positive(), "modulus must be positive");
        let q = (self / m).floor();
        self - &(m * &q)
    }

    /// Integer value if this ratio is integral and fits in an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Lossy conversion for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// True when numerator and denominator are coprime and the denominator is positive.
    pub fn is_reduced(&self) -> bool {
        self.denom().is_positive() && self.numer().gcd(self.denom()).is_one()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Ratio {
    fn from(n: i64) -> Self {
        Ratio::from_integer(n)
    }
}

impl From<BigRational> for Ratio {
    fn from(r: BigRational) -> Self {
        Ratio(r)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for Ratio {
    type Err = ParseRatioError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s = text.trim();
        if s.is_empty() {
            return Err(ParseRatioError::Empty);
        }
        let (negative, body) = match s.as_bytes()[0] {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let malformed = || ParseRatioError::Malformed(s.to_string());
        let (numer, denom) = match body.split_once('/') {
            Some((p, q)) => (
                parse_digits(p).ok_or_else(malformed)?,
                parse_digits(q).ok_or_else(malformed)?,
            ),
            None => (parse_digits(body).ok_or_else(malformed)?, BigInt::one()),
        };
        if denom.is_zero() {
            return Err(ParseRatioError::ZeroDenominator(s.to_string()));
        }
        let numer = if negative { -numer } else { numer };
        Ok(Ratio(BigRational::new(numer, denom)))
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Ratio> for Ratio {
            type Output = Ratio;
            fn $method(self, rhs: Ratio) -> Ratio {
                Ratio((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Ratio> for Ratio {
            type Output = Ratio;
            fn $method(self, rhs: &'a Ratio) -> Ratio {
                Ratio((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Ratio> for &'a Ratio {
            type Output = Ratio;
            fn $method(self, rhs: Ratio) -> Ratio {
                Ratio((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Ratio> for &'a Ratio {
            type Output = Ratio;
            fn $method(self, rhs: &'b Ratio) -> Ratio {
                Ratio((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl AddAssign<&Ratio> for Ratio {
    fn add_assign(&mut self, rhs: &Ratio) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Ratio> for Ratio {
    fn add_assign(&mut self, rhs: Ratio) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Ratio> for Ratio {
    fn sub_assign(&mut self, rhs: &Ratio) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign<Ratio> for Ratio {
    fn sub_assign(&mut self, rhs: Ratio) {
        self.0 -= rhs.0;
    }
}

impl MulAssign<&Ratio> for Ratio {
    fn mul_assign(&mut self, rhs: &Ratio) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Ratio {
    type Output = Ratio;
    fn neg(self) -> Ratio {
        Ratio(-self.0)
    }
}

impl Neg for &Ratio {
    type Output = Ratio;
    fn neg(self) -> Ratio {
        Ratio(-&self.0)
    }
}

impl Sum for Ratio {
    fn sum<I: Iterator<Item = Ratio>>(iter: I) -> Ratio {
        iter.fold(Ratio::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Ratio> for Ratio {
    fn sum<I: Iterator<Item = &'a Ratio>>(iter: I) -> Ratio {
        iter.fold(Ratio::zero(), |acc, x| acc + x)
    }
}

/// Shorthand for `Ratio::new`, used heavily in tables of positions.
pub fn q(numer: i64, denom: i64) -> Ratio {
    Ratio::new(numer, denom)
}

/// A position on the circuit in miles, reduced into `[0, circuit)`.
///
/// The base sits at 0; the circuit length itself is identified with 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MilePos(Ratio);

impl MilePos {
    pub fn new(miles: Ratio, circuit: &Ratio) -> Self {
        MilePos(miles.rem_euclid(circuit))
    }

    pub fn base() -> Self {
        MilePos(Ratio::zero())
    }

    pub fn value(&self) -> &Ratio {
        &self.0
    }

    pub fn is_base(&self) -> bool {
        self.0.is_zero()
    }

    /// Mirror image about the base.
    pub fn mirrored(&self, circuit: &Ratio) -> Self {
        MilePos::new(-&self.0, circuit)
    }
}

impl fmt::Display for MilePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for MilePos {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// Distance in day-units measured backward from the base: `(circuit − p) / daily`.
///
/// The base itself maps to 0.
pub fn to_units(p: &MilePos, circuit: &Ratio, daily: &Ratio) -> Ratio {
    if p.is_base() {
        Ratio::zero()
    } else {
        (circuit - p.value()) / daily
    }
}

/// Inverse of [`to_units`].
pub fn from_units(units: &Ratio, circuit: &Ratio, daily: &Ratio) -> MilePos {
    MilePos::new(circuit - &(units * daily), circuit)
}
