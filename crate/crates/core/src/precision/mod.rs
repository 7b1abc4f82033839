//! Arbitrary-precision scalar layer: working context, numbers, quadrature,
//! special functions and finite differences.

mod cubic;
mod diff;
mod quadrature;
mod real;
mod special;

pub use cubic::real_cubic_root;
pub use diff::{central_derivative, central_derivative_with_step, stencil_combination, DerivativeOrder};
pub use quadrature::{integrate, integrate_many, tanh_sinh_integrate, Abscissa, Bound, QuadratureStats};
pub use real::{decimal_digits_for, BigReal};
pub use special::{gamma, kummer_u, kummer_u_integral_ladder};

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

/// Smallest working precision accepted by the kernel.
pub const MIN_BITS: u32 = 128;

/// Working precision plus the derived knobs of the numerical kernels.
///
/// Immutable once built; the `with_*` methods return modified copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    bits: u32,
    quad_level: u32,
    fd_step_exponent: u32,
}

impl PrecisionContext {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::domain(format!(
                "precision of {bits} bits is below the minimum of {MIN_BITS}"
            )));
        }
        Ok(PrecisionContext {
            bits,
            quad_level: default_quad_level(bits),
            fd_step_exponent: bits / 4,
        })
    }

    /// Default policy for tables up to degree `n_max`: `max(256, 12 n_max)` bits.
    pub fn for_degree(n_max: usize) -> Self {
        let bits = (12 * n_max as u64).clamp(256, u32::MAX as u64 / 4) as u32;
        PrecisionContext::new(bits).expect("policy precision is above the minimum")
    }

    pub fn with_quad_level(self, quad_level: u32) -> Result<Self> {
        if quad_level == 0 || quad_level > 24 {
            return Err(Error::domain(format!("quad_level {quad_level} outside 1..=24")));
        }
        Ok(PrecisionContext { quad_level, ..self })
    }

    pub fn with_fd_step_exponent(self, fd_step_exponent: u32) -> Result<Self> {
        if fd_step_exponent == 0 {
            return Err(Error::domain("fd_step_exponent must be positive"));
        }
        Ok(PrecisionContext {
            fd_step_exponent,
            ..self
        })
    }

    /// Same knobs scaled to twice the precision (used by escalation).
    pub fn doubled(&self) -> Self {
        let bits = self.bits.saturating_mul(2);
        let fd = if self.fd_step_exponent == self.bits / 4 {
            bits / 4
        } else {
            self.fd_step_exponent
        };
        PrecisionContext {
            bits,
            quad_level: self.quad_level.max(default_quad_level(bits)),
            fd_step_exponent: fd,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn quad_level(&self) -> u32 {
        self.quad_level
    }

    pub fn fd_step_exponent(&self) -> u32 {
        self.fd_step_exponent
    }

    pub fn zero(&self) -> BigReal {
        self.int(0)
    }

    pub fn one(&self) -> BigReal {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> BigReal {
        BigReal::from_float(Float::with_val(self.bits, v))
    }

    /// The rational `num/den`, correctly rounded.
    pub fn ratio(&self, num: i64, den: i64) -> BigReal {
        assert!(den != 0, "zero denominator");
        let q = rug::Rational::from((num, den));
        BigReal::from_float(Float::with_val(self.bits, &q))
    }

    /// Exact conversion of a binary double.
    pub fn from_f64(&self, v: f64) -> BigReal {
        BigReal::from_float(Float::with_val(self.bits, v))
    }

    /// Parses a decimal literal such as `"2.5"`, `"1/2"` or `"1e-3"`.
    pub fn parse(&self, s: &str) -> Result<BigReal> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num = self.parse(num)?;
            let den = self.parse(den)?;
            if den.is_zero() {
                return Err(Error::domain(format!("zero denominator in {s:?}")));
            }
            return Ok(num / den);
        }
        let parsed =
            Float::parse(s).map_err(|e| Error::domain(format!("cannot parse {s:?}: {e}")))?;
        let v = Float::with_val(self.bits, parsed);
        if !v.is_finite() {
            return Err(Error::domain(format!("non-finite literal {s:?}")));
        }
        Ok(BigReal::from_float(v))
    }

    pub fn pi(&self) -> BigReal {
        BigReal::from_float(Float::with_val(self.bits, Constant::Pi))
    }

    pub fn ln2(&self) -> BigReal {
        BigReal::from_float(Float::with_val(self.bits, Constant::Log2))
    }

    /// `2^k`.
    pub fn pow2(&self, k: i32) -> BigReal {
        BigReal::from_float(Float::with_val(self.bits, Float::i_exp(1, k)))
    }

    /// Unit roundoff `2^(1-bits)`.
    pub fn epsilon(&self) -> BigReal {
        self.pow2(1 - self.bits as i32)
    }

    /// Finite-difference step `2^(-fd_step_exponent)`.
    pub fn fd_step(&self) -> BigReal {
        self.pow2(-(self.fd_step_exponent as i32))
    }

    /// Converts a value from any context into this one.
    pub fn adopt(&self, v: &BigReal) -> BigReal {
        v.convert(self.bits)
    }
}

fn default_quad_level(bits: u32) -> u32 {
    // level L has step 2^-L; DE rules roughly double the correct digits per level
    (32 - (bits.max(2) - 1).leading_zeros()) + 2
}

/// Runs `op` at `ctx`, retrying at twice the precision (at most twice) when
/// it reports [`Error::PrecisionExhausted`].
pub fn with_escalation<T>(
    ctx: &PrecisionContext,
    mut op: impl FnMut(&PrecisionContext) -> Result<T>,
) -> Result<T> {
    let mut current = *ctx;
    let mut attempt = 0;
    loop {
        match op(&current) {
            Err(e) if e.is_precision_exhausted() && attempt < 2 => {
                attempt += 1;
                current = current.doubled();
            }
            other => return other,
        }
    }
}
