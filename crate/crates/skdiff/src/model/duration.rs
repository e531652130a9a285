//! Exact rational time values. The unit is one whole note, so a quarter
//! note is `1/4` and a full bar of 2/4 is `1/2`. All arithmetic is exact;
//! there is no floating point anywhere on the time axis.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::model::ModelError;

/// A non-negative span of musical time, stored in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalDuration(Ratio<i64>);

impl RationalDuration {
    pub const ZERO: RationalDuration = RationalDuration(Ratio::new_raw(0, 1));

    /// Builds `numerator/denominator` whole notes, reduced to lowest terms.
    pub fn new(numerator: i64, denominator: i64) -> Result<Self, ModelError> {
        if denominator <= 0 {
            return Err(ModelError::InvalidDuration {
                num: numerator,
                den: denominator,
            });
        }
        let r = Ratio::new(numerator, denominator);
        if r.is_negative() {
            return Err(ModelError::InvalidDuration {
                num: numerator,
                den: denominator,
            });
        }
        Ok(RationalDuration(r))
    }

    /// Shorthand used throughout tests and fixtures; panics on invalid input.
    pub fn frac(numerator: i64, denominator: i64) -> Self {
        Self::new(numerator, denominator).expect("valid duration fraction")
    }

    pub fn whole(n: i64) -> Self {
        Self::frac(n, 1)
    }

    pub fn numerator(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// Greatest common divisor: the widest grid step that measures both values.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let den = self.0.denom().lcm(other.0.denom());
        let a = self.0.numer() * (den / self.0.denom());
        let b = other.0.numer() * (den / other.0.denom());
        RationalDuration(Ratio::new(a.gcd(&b), den))
    }

    /// True when `self` is an integer multiple of `unit`.
    pub fn is_multiple_of(&self, unit: &Self) -> bool {
        if unit.is_zero() {
            return self.is_zero();
        }
        (self.0 / unit.0).is_integer()
    }

    /// Floor of `self / unit` for positive `unit`.
    pub fn div_floor(&self, unit: &Self) -> i64 {
        (self.0 / unit.0).floor().to_integer()
    }

    /// Exact quotient `self / unit`, provided it is a whole number.
    pub fn exact_div(&self, unit: &Self) -> Option<i64> {
        if unit.is_zero() {
            return None;
        }
        let q = self.0 / unit.0;
        q.is_integer().then(|| q.to_integer())
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let r = self.0 - other.0;
        (!r.is_negative()).then_some(RationalDuration(r))
    }
}

impl Add for RationalDuration {
    type Output = RationalDuration;
    fn add(self, rhs: Self) -> Self {
        RationalDuration(self.0 + rhs.0)
    }
}

impl AddAssign for RationalDuration {
    fn add_assign(&mut self, rhs: Self) {
        self.0 += rhs.0;
    }
}

impl Sub for RationalDuration {
    type Output = RationalDuration;
    fn sub(self, rhs: Self) -> Self {
        let r = self.0 - rhs.0;
        debug_assert!(!r.is_negative(), "duration subtraction went negative");
        RationalDuration(r)
    }
}

impl SubAssign for RationalDuration {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Mul<i64> for RationalDuration {
    type Output = RationalDuration;
    fn mul(self, rhs: i64) -> Self {
        RationalDuration(self.0 * rhs)
    }
}

impl Div<i64> for RationalDuration {
    type Output = RationalDuration;
    fn div(self, rhs: i64) -> Self {
        RationalDuration(self.0 / rhs)
    }
}

impl Sum for RationalDuration {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(RationalDuration::ZERO, |acc, d| acc + d)
    }
}

impl fmt::Display for RationalDuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for RationalDuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for RationalDuration {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::DurationSyntax(s.to_string());
        let (num, den) = s.split_once('/').ok_or_else(bad)?;
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        RationalDuration::new(num, den).map_err(|_| bad())
    }
}

impl Serialize for RationalDuration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RationalDuration {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
