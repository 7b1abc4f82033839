//! Fourth-order central finite differences.

use super::{BigReal, PrecisionContext};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DerivativeOrder {
    First,
    Second,
}

/// Combines samples `f(t−2h), f(t−h), f(t), f(t+h), f(t+2h)` into the
/// five-point fourth-order approximation of the requested derivative.
pub fn stencil_combination(
    samples: [&BigReal; 5],
    h: &BigReal,
    order: DerivativeOrder,
) -> BigReal {
    let [m2, m1, c, p1, p2] = samples;
    match order {
        DerivativeOrder::First => ((m2 - p2) + (p1 - m1) * 8) / (h * 12),
        DerivativeOrder::Second => {
            ((m1 + p1) * 16 - (m2 + p2) - c * 30) / (h.square() * 12)
        }
    }
}

/// Derivative of `f` at `t` with the context's default step `2^(-fd_step_exponent)`.
///
/// The stencil must stay inside `t > 0`.
pub fn central_derivative<F>(
    f: F,
    t: &BigReal,
    order: DerivativeOrder,
    ctx: &PrecisionContext,
) -> Result<BigReal>
where
    F: FnMut(&BigReal) -> Result<BigReal>,
{
    central_derivative_with_step(f, t, &ctx.fd_step(), order, ctx)
}

/// As [`central_derivative`] with an explicit step `h`.
pub fn central_derivative_with_step<F>(
    mut f: F,
    t: &BigReal,
    h: &BigReal,
    order: DerivativeOrder,
    ctx: &PrecisionContext,
) -> Result<BigReal>
where
    F: FnMut(&BigReal) -> Result<BigReal>,
{
    let t = ctx.adopt(t);
    let h = ctx.adopt(h);
    if !h.is_positive() {
        return Err(Error::domain("finite-difference step must be positive"));
    }
    if !(&t - h.mul_pow2(1)).is_positive() {
        return Err(Error::domain(format!(
            "stencil around t = {} leaves the domain t > 0",
            t.to_decimal(20)
        )));
    }
    let samples = [
        f(&(&t - h.mul_pow2(1)))?,
        f(&(&t - &h))?,
        if order == DerivativeOrder::Second {
            f(&t)?
        } else {
            ctx.zero()
        },
        f(&(&t + &h))?,
        f(&(&t + h.mul_pow2(1)))?,
    ];
    Ok(stencil_combination(
        [&samples[0], &samples[1], &samples[2], &samples[3], &samples[4]],
        &h,
        order,
    ))
}
