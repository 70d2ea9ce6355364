//! Generic scalar abstraction over the two arithmetic modes.
//!
//! Everything numeric in this crate is generic over [`Scalar`]: exact
//! arbitrary-precision rationals ([`BigRational`]) when results must be
//! exact, `f64` when speed matters and round-off is acceptable. The two
//! modes share all algorithm code; only a few solvers branch on
//! [`Scalar::EXACT`] to pick a numerically appropriate route.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};

/// A field scalar: exact rational or double-precision float.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Signed
    + std::ops::Div<Output = Self>
{
    /// True when arithmetic in this type is exact (no rounding).
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    /// The value `num / den` (den must be nonzero).
    fn from_big_ratio(num: &BigInt, den: &BigInt) -> Self;

    /// Closest `f64` (lossy in exact mode).
    fn to_f64(&self) -> f64;

    /// Small-exponent integer power.
    fn powu(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        big_to_f64(v)
    }

    fn from_big_ratio(num: &BigInt, den: &BigInt) -> Self {
        big_ratio_to_f64(num, den)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn powu(&self, e: usize) -> Self {
        self.powi(e as i32)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_big_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
    }

    fn to_f64(&self) -> f64 {
        big_ratio_to_f64(self.numer(), self.denom())
    }
}

/// `BigInt` to `f64`, saturating to infinity on overflow.
pub fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        if v.sign() == Sign::Minus {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `num / den` as `f64`, correct even when both operands are far outside
/// the `f64` range. Scales by powers of two so the quotient itself is what
/// gets rounded, not the operands.
pub fn big_ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    assert!(!den.is_zero(), "zero denominator");
    let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
    let num = num.magnitude();
    let den = den.magnitude();
    // Shift the numerator so the integer quotient carries ~80 significant
    // bits, convert that, then undo the shift in floating point.
    let shift: i64 = den.bits() as i64 - num.bits() as i64 + 80;
    let scaled: num_bigint::BigUint = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let q = scaled.to_f64().unwrap_or(f64::INFINITY);
    let v = q * (-shift as f64).exp2();
    if negative {
        -v
    } else {
        v
    }
}
