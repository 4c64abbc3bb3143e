//! Pointwise evaluation of the wavelet representation
//! `(U(j,β)f)(x) = |det A|^{-j/2} f(A^{-j}(x − β))`.
//!
//! The scale factor is the only irrational quantity, so values are carried
//! as `c · √D^s` with `c` rational, `D = |det A|` and `s ∈ {0, 1}`.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::exact::{fmt_rational, RationalVector};
use crate::group::{DilationGroup, GroupElement};

/// `coeff · √base` when `sqrt` is set, `coeff` otherwise.
///
/// Canonical: `sqrt` is only set when `base` is not a perfect square and
/// `coeff ≠ 0`, so equality of values is structural equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledValue {
    coeff: BigRational,
    base: BigInt,
    sqrt: bool,
}

impl ScaledValue {
    pub fn rational(coeff: BigRational) -> Self {
        ScaledValue {
            coeff,
            base: BigInt::one(),
            sqrt: false,
        }
    }

    /// `coeff · base^{half_power/2}`.
    pub fn new(coeff: BigRational, base: &BigInt, half_power: i64) -> Self {
        let base = base.abs();
        let root = base.sqrt();
        let (base_eff, half_power) = if &root * &root == base {
            (root, 2 * half_power)
        } else {
            (base.clone(), half_power)
        };
        // base^{h/2} = base^{floor(h/2)} · √base^{h mod 2}
        let whole = half_power.div_euclid(2);
        let odd = half_power.rem_euclid(2) == 1;
        let factor = if whole >= 0 {
            BigRational::from_integer(num::pow(base_eff.clone(), whole as usize))
        } else {
            BigRational::new(BigInt::one(), num::pow(base_eff.clone(), whole.unsigned_abs() as usize))
        };
        let coeff = coeff * factor;
        let sqrt = odd && !coeff.is_zero();
        ScaledValue {
            coeff,
            base: if sqrt { base_eff } else { BigInt::one() },
            sqrt,
        }
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn has_sqrt(&self) -> bool {
        self.sqrt
    }

    pub fn base(&self) -> &BigInt {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }
}

impl fmt::Display for ScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrt {
            write!(f, "{}·√{}", fmt_rational(&self.coeff), self.base)
        } else {
            f.write_str(&fmt_rational(&self.coeff))
        }
    }
}

impl Serialize for ScaledValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `|det A|^{half_power/2} · f(A^{-j}(x − β))` with the power still to be
/// absorbed; lets composed operators be evaluated without losing exactness.
fn eval_with_power<F>(grp: &DilationGroup, g: &GroupElement, f: &F, x: &RationalVector, half_power: i64) -> Result<ScaledValue>
where
    F: Fn(&RationalVector) -> BigRational,
{
    let y = grp.alpha_pow(-g.j(), &(x - g.b()))?;
    Ok(ScaledValue::new(f(&y), grp.det(), half_power - g.j()))
}

/// `(U(g)f)(x)` for a function `f` evaluable at rational points.
pub fn wavelet_rep_eval<F>(grp: &DilationGroup, g: &GroupElement, f: &F, x: &RationalVector) -> Result<ScaledValue>
where
    F: Fn(&RationalVector) -> BigRational,
{
    eval_with_power(grp, g, f, x, 0)
}

/// `(U(g)U(h)f)(x)`: applies `U(g)` to the function `U(h)f`, tracking both
/// scale factors as one exponent.
pub fn wavelet_rep_eval_composed<F>(
    grp: &DilationGroup,
    g: &GroupElement,
    h: &GroupElement,
    f: &F,
    x: &RationalVector,
) -> Result<ScaledValue>
where
    F: Fn(&RationalVector) -> BigRational,
{
    let y = grp.alpha_pow(-g.j(), &(x - g.b()))?;
    eval_with_power(grp, h, f, &y, -g.j())
}

/// Indicator of the half-open box `∏[lo_i, hi_i)`.
pub fn box_indicator(lo: RationalVector, hi: RationalVector) -> impl Fn(&RationalVector) -> BigRational {
    move |x| {
        let inside = x
            .entries()
            .iter()
            .zip(lo.entries().iter().zip(hi.entries()))
            .all(|(v, (l, h))| l <= v && v < h);
        if inside {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    }
}
