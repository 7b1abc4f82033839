//! `BigReal`: an MPFR float tagged with the precision of the context that
//! produced it.
//!
//! Operator overloads panic on a precision mismatch (mirroring how shape
//! mismatches panic in array libraries); the `checked_*` methods report the
//! same condition as [`Error::ContextMismatch`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct BigReal(Float);

impl BigReal {
    pub(crate) fn from_float(value: Float) -> Self {
        BigReal(value)
    }

    /// Working precision in bits; identifies the producing context.
    pub fn bits(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    /// Re-rounds the value to another precision.
    pub fn convert(&self, bits: u32) -> BigReal {
        BigReal(Float::with_val(bits, &self.0))
    }

    fn check(&self, other: &BigReal) -> Result<()> {
        if self.bits() == other.bits() {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.bits(),
                right: other.bits(),
            })
        }
    }

    #[track_caller]
    fn assert_same(&self, other: &BigReal) {
        if let Err(e) = self.check(other) {
            panic!("{e}");
        }
    }

    pub fn checked_add(&self, rhs: &BigReal) -> Result<BigReal> {
        self.check(rhs)?;
        Ok(self + rhs)
    }

    pub fn checked_sub(&self, rhs: &BigReal) -> Result<BigReal> {
        self.check(rhs)?;
        Ok(self - rhs)
    }

    pub fn checked_mul(&self, rhs: &BigReal) -> Result<BigReal> {
        self.check(rhs)?;
        Ok(self * rhs)
    }

    pub fn checked_div(&self, rhs: &BigReal) -> Result<BigReal> {
        self.check(rhs)?;
        Ok(self / rhs)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero() && !self.0.is_nan()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero() && !self.0.is_nan()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`, `None` for zero.
    pub fn exponent(&self) -> Option<i32> {
        self.0.get_exp()
    }

    pub fn abs(&self) -> BigReal {
        BigReal(Float::with_val(self.bits(), self.0.abs_ref()))
    }

    pub fn square(&self) -> BigReal {
        BigReal(Float::with_val(self.bits(), self.0.square_ref()))
    }

    pub fn recip(&self) -> BigReal {
        BigReal(Float::with_val(self.bits(), self.0.recip_ref()))
    }

    pub fn sqrt(&self) -> BigReal {
        BigReal(Float::with_val(self.bits(), self.0.sqrt_ref()))
    }

    pub fn cbrt(&self) -> BigReal {
        BigReal(Float::with_val(self.bits(), self.0.cbrt_ref()))
    }

    pub fn exp(&self) -> BigReal {
        BigReal(Float::with_val(self.bits(), self.0.exp_ref()))
    }

    pub fn ln(&self) -> BigReal {
        BigReal(Float::with_val(self.bits(), self.0.ln_ref()))
    }

    /// `ln(1 + self)`, accurate for small arguments.
    pub fn ln_1p(&self) -> BigReal {
        BigReal(Float::with_val(self.bits(), self.0.ln_1p_ref()))
    }

    pub fn sinh(&self) -> BigReal {
        BigReal(Float::with_val(self.bits(), self.0.sinh_ref()))
    }

    pub fn cosh(&self) -> BigReal {
        BigReal(Float::with_val(self.bits(), self.0.cosh_ref()))
    }

    /// `self^exponent` for a real exponent; `self` must be non-negative.
    pub fn pow(&self, exponent: &BigReal) -> BigReal {
        self.assert_same(exponent);
        BigReal(Float::with_val(self.bits(), (&self.0).pow(&exponent.0)))
    }

    pub fn powi(&self, exponent: i32) -> BigReal {
        BigReal(Float::with_val(self.bits(), (&self.0).pow(exponent)))
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i32) -> BigReal {
        let mut v = self.0.clone();
        if k >= 0 {
            v <<= k as u32;
        } else {
            v >>= k.unsigned_abs();
        }
        BigReal(v)
    }

    pub fn max(self, other: BigReal) -> BigReal {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: BigReal) -> BigReal {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        self.0.to_string_radix(10, Some(digits.max(1)))
    }

    /// Digit count that represents this precision losslessly.
    pub fn decimal_digits(&self) -> usize {
        decimal_digits_for(self.bits())
    }
}

/// `ceil(bits * 0.302) + 2`.
pub fn decimal_digits_for(bits: u32) -> usize {
    (bits as f64 * 0.302).ceil() as usize + 2
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({}, {} bits)", self.to_decimal(24), self.bits())
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(|| self.decimal_digits());
        f.write_str(&self.to_decimal(digits))
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<i32> for BigReal {
    fn eq(&self, other: &i32) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<i32> for BigReal {
    fn partial_cmp(&self, other: &i32) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

macro_rules! binop {
    ($Trait:ident, $method:ident, $Assign:ident, $assign:ident) => {
        impl $Trait<&BigReal> for &BigReal {
            type Output = BigReal;
            #[track_caller]
            fn $method(self, rhs: &BigReal) -> BigReal {
                self.assert_same(rhs);
                BigReal(Float::with_val(self.bits(), $Trait::$method(&self.0, &rhs.0)))
            }
        }
        impl $Trait<BigReal> for &BigReal {
            type Output = BigReal;
            #[track_caller]
            fn $method(self, rhs: BigReal) -> BigReal {
                $Trait::$method(self, &rhs)
            }
        }
        impl $Trait<&BigReal> for BigReal {
            type Output = BigReal;
            #[track_caller]
            fn $method(mut self, rhs: &BigReal) -> BigReal {
                self.assert_same(rhs);
                $Assign::$assign(&mut self.0, &rhs.0);
                self
            }
        }
        impl $Trait<BigReal> for BigReal {
            type Output = BigReal;
            #[track_caller]
            fn $method(self, rhs: BigReal) -> BigReal {
                $Trait::$method(self, &rhs)
            }
        }
        impl $Assign<&BigReal> for BigReal {
            #[track_caller]
            fn $assign(&mut self, rhs: &BigReal) {
                self.assert_same(rhs);
                $Assign::$assign(&mut self.0, &rhs.0);
            }
        }
        impl $Assign<BigReal> for BigReal {
            #[track_caller]
            fn $assign(&mut self, rhs: BigReal) {
                $Assign::$assign(self, &rhs);
            }
        }
        impl $Trait<i32> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: i32) -> BigReal {
                BigReal(Float::with_val(self.bits(), $Trait::$method(&self.0, rhs)))
            }
        }
        impl $Trait<i32> for BigReal {
            type Output = BigReal;
            fn $method(mut self, rhs: i32) -> BigReal {
                $Assign::$assign(&mut self.0, rhs);
                self
            }
        }
        impl $Trait<&BigReal> for i32 {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                BigReal(Float::with_val(rhs.bits(), $Trait::$method(self, &rhs.0)))
            }
        }
        impl $Trait<BigReal> for i32 {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                $Trait::$method(self, &rhs)
            }
        }
        impl $Assign<i32> for BigReal {
            fn $assign(&mut self, rhs: i32) {
                $Assign::$assign(&mut self.0, rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(Float::with_val(self.bits(), -&self.0))
    }
}
