//! Gamma and the confluent hypergeometric function of the second kind.

use rug::Float;

use super::quadrature::{integrate_many, Bound};
use super::{BigReal, PrecisionContext};
use crate::error::{Error, Result};

/// Γ(x) for x > 0 (MPFR, correctly rounded).
pub fn gamma(x: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    if !x.is_positive() {
        return Err(Error::domain(format!(
            "gamma is only provided for positive arguments, got {}",
            x.to_decimal(20)
        )));
    }
    let x = ctx.adopt(x);
    Ok(BigReal::from_float(Float::with_val(
        ctx.bits(),
        x.as_float().gamma_ref(),
    )))
}

/// The integrals `∫₀^∞ e^{−zs} s^{a+j−1} (1+s)^{b−a−j−1} ds = Γ(a+j)·U(a+j, b, z)`
/// for `j = 0..count`, sharing one set of quadrature nodes.
///
/// Requires `a > 0` and `z > 0`.
pub fn kummer_u_integral_ladder(
    a: &BigReal,
    count: usize,
    b: &BigReal,
    z: &BigReal,
    ctx: &PrecisionContext,
) -> Result<Vec<BigReal>> {
    if !a.is_positive() {
        return Err(Error::domain("Kummer U integral needs a > 0"));
    }
    if !z.is_positive() {
        return Err(Error::domain("Kummer U integral needs z > 0"));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let (a, b, z) = (ctx.adopt(a), ctx.adopt(b), ctx.adopt(z));
    let a_minus_one = &a - 1;
    let tail_exp = &b - &a - 1;
    let (values, _) = integrate_many(
        |p, out| {
            let s = p.from_lo.as_ref().expect("half-line from 0");
            if s.is_zero() {
                out.iter_mut().for_each(|o| *o = ctx.zero());
                return;
            }
            let ln_s = s.ln();
            let ln_1ps = s.ln_1p();
            let log_base = -(&z * s) + &a_minus_one * &ln_s + &tail_exp * &ln_1ps;
            let mut term = log_base.exp();
            // s/(1+s), formed in log space to stay accurate for tiny s
            let ratio = (ln_s - ln_1ps).exp();
            for slot in out.iter_mut() {
                *slot = term.clone();
                term *= &ratio;
            }
        },
        count,
        ctx.zero(),
        Bound::PosInfinity,
        ctx,
    )?;
    Ok(values)
}

/// U(a, b, z) = (1/Γ(a)) ∫₀^∞ e^{−zs} s^{a−1} (1+s)^{b−a−1} ds for a > 0, z > 0.
pub fn kummer_u(
    a: &BigReal,
    b: &BigReal,
    z: &BigReal,
    ctx: &PrecisionContext,
) -> Result<BigReal> {
    let integral = kummer_u_integral_ladder(a, 1, b, z, ctx)?
        .pop()
        .expect("one component");
    Ok(integral / gamma(a, ctx)?)
}
