use super::{one_minus_x2, weight_from_gap, WeightParams};
use crate::error::{Error, Result};
use crate::precision::{integrate_many, kummer_u_integral_ladder, BigReal, PrecisionContext};

/// μ_0..μ_{k_max} at one parameter point.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub params: WeightParams,
    pub k_max: usize,
    /// μ_k(t); odd entries are exact zeros.
    pub mu: Vec<BigReal>,
    /// μ_k(t) for the weight with α replaced by α − 1, when requested.
    /// Used as the exact t-derivative: d/dt μ_k(t; α) = −μ_k(t; α − 1).
    pub mu_alpha_minus_one: Option<Vec<BigReal>>,
}

impl MomentTable {
    pub fn bits(&self) -> u32 {
        self.mu[0].bits()
    }
}

fn check_k_max(k_max: usize) -> Result<()> {
    if k_max < 2 || !k_max.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "k_max must be even and at least 2, got {k_max}"
        )));
    }
    Ok(())
}

/// Even moments `e^{−t} Γ(a) U(a, −α', t)` with `a = (k+1)/2`, evaluated as the
/// integral `∫₀^∞ e^{−ts} s^{a−1} (1+s)^{−α'−a−1} ds` (the Γ(a) factor cancels
/// against the normalization of U).
fn closed_form_moments(
    alpha: &BigReal,
    t: &BigReal,
    k_max: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<BigReal>> {
    let evens = kummer_u_integral_ladder(&ctx.ratio(1, 2), k_max / 2 + 1, &(-alpha), t, ctx)?;
    let scale = (-t).exp();
    let mut mu = Vec::with_capacity(k_max + 1);
    for (m, v) in evens.into_iter().enumerate() {
        mu.push(v * &scale);
        if 2 * m < k_max {
            mu.push(ctx.zero());
        }
    }
    Ok(mu)
}

/// Moments via the Kummer-U closed form.
pub fn build_moments(
    params: &WeightParams,
    k_max: usize,
    ctx: &PrecisionContext,
) -> Result<MomentTable> {
    check_k_max(k_max)?;
    let (alpha, t) = params.at(ctx);
    Ok(MomentTable {
        params: params.clone(),
        k_max,
        mu: closed_form_moments(&alpha, &t, k_max, ctx)?,
        mu_alpha_minus_one: None,
    })
}

/// As [`build_moments`], also filling the α − 1 companion table.
pub fn build_moments_with_companion(
    params: &WeightParams,
    k_max: usize,
    ctx: &PrecisionContext,
) -> Result<MomentTable> {
    let mut table = build_moments(params, k_max, ctx)?;
    let t = ctx.adopt(params.t());
    let shifted = ctx.adopt(&params.alpha_minus_one());
    table.mu_alpha_minus_one = Some(closed_form_moments(&shifted, &t, k_max, ctx)?);
    Ok(table)
}

/// Moments by direct tanh-sinh quadrature of `x^k w(x,t)` over `[−1, 1]`,
/// all `k ≤ k_max` sharing one set of nodes.
pub fn moments_by_quadrature(
    params: &WeightParams,
    k_max: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<BigReal>> {
    let (alpha, t) = params.at(ctx);
    let (mu, _) = integrate_many(
        |p, out| {
            let w = weight_from_gap(&one_minus_x2(p, ctx), &alpha, &t, ctx);
            let mut term = w;
            for slot in out.iter_mut() {
                *slot = term.clone();
                term *= &p.x;
            }
        },
        k_max + 1,
        -ctx.one(),
        ctx.one(),
        ctx,
    )?;
    Ok(mu)
}
