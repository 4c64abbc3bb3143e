use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Zero};
use serde::{Serialize, Serializer};

use super::parse_rational;
use crate::error::{Error, Result};

/// A point `e^{2πiθ}` of the circle, stored as `θ ∈ [0, 1)` in lowest terms.
///
/// Equality is structural, so two phases compare equal exactly when the
/// corresponding unit complex numbers do.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalAngle(BigRational);

impl RationalAngle {
    pub fn zero() -> Self {
        RationalAngle(BigRational::zero())
    }

    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::from_rational(&BigRational::new(num.into(), den)))
    }

    /// Reduces an arbitrary rational modulo 1.
    pub fn from_rational(r: &BigRational) -> Self {
        RationalAngle(r - r.floor())
    }

    pub fn from_integer_ratio(num: &BigInt, den: &BigInt) -> Self {
        let r = num.mod_floor(den);
        RationalAngle(BigRational::new(r, den.clone()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
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

    /// The complex conjugate phase.
    pub fn conj(&self) -> Self {
        -self.clone()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_rational(&(&self.0 * BigRational::from_integer(k.clone())))
    }

    /// `Some(n)` when the phase is `i^n`, i.e. a quarter turn.
    pub fn quarter_turns(&self) -> Option<u8> {
        let four = &self.0 * BigRational::from_integer(BigInt::from(4));
        if four.is_integer() {
            Some(four.to_integer().iter_u32_digits().next().unwrap_or(0) as u8)
        } else {
            None
        }
    }
}

impl Default for RationalAngle {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for RationalAngle {
    type Output = RationalAngle;
    fn add(self, rhs: RationalAngle) -> RationalAngle {
        &self + &rhs
    }
}

impl<'a> Add<&'a RationalAngle> for &'a RationalAngle {
    type Output = RationalAngle;
    fn add(self, rhs: &RationalAngle) -> RationalAngle {
        let s = &self.0 + &rhs.0;
        if s >= BigRational::one() {
            RationalAngle(s - BigRational::one())
        } else {
            RationalAngle(s)
        }
    }
}

impl AddAssign<&RationalAngle> for RationalAngle {
    fn add_assign(&mut self, rhs: &RationalAngle) {
        *self = &*self + rhs;
    }
}

impl Neg for RationalAngle {
    type Output = RationalAngle;
    fn neg(self) -> RationalAngle {
        if self.0.is_zero() {
            self
        } else {
            RationalAngle(BigRational::one() - self.0)
        }
    }
}

impl<'a> Sub<&'a RationalAngle> for &'a RationalAngle {
    type Output = RationalAngle;
    fn sub(self, rhs: &RationalAngle) -> RationalAngle {
        self + &(-rhs.clone())
    }
}

impl Sub for RationalAngle {
    type Output = RationalAngle;
    fn sub(self, rhs: RationalAngle) -> RationalAngle {
        &self - &rhs
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::fmt_rational(&self.0))
    }
}

impl FromStr for RationalAngle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(Self::from_rational(&parse_rational(s)?))
    }
}

impl Serialize for RationalAngle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn angle_normalize(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<RationalAngle> {
    RationalAngle::new(num, den)
}

pub fn angle_add(a: &RationalAngle, b: &RationalAngle) -> RationalAngle {
    a + b
}
