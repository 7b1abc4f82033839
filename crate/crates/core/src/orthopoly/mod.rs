//! Moments, Hankel factorization and the per-degree quantities of the monic
//! orthogonal polynomials for `w(x,t) = (1−x²)^α e^{−t/(1−x²)}` on `[−1, 1]`.

mod moments;
mod poly;
mod table;

pub use moments::{build_moments, build_moments_with_companion, moments_by_quadrature, MomentTable};
pub use poly::{polynomial_coeffs, PolyCoeffs};
pub use table::{factor_hankel, ladder_quantities, sigma_values, RecurrenceTable};

use crate::error::{Error, Result};
use crate::precision::{kummer_u, Abscissa, BigReal, PrecisionContext};

/// The pair (α, t) defining the weight; both strictly positive.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightParams {
    alpha: BigReal,
    t: BigReal,
}

impl WeightParams {
    pub fn new(alpha: BigReal, t: BigReal) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::domain(format!(
                "alpha must be > 0, got {}",
                alpha.to_decimal(20)
            )));
        }
        if !t.is_positive() {
            return Err(Error::domain(format!(
                "t must be > 0, got {}",
                t.to_decimal(20)
            )));
        }
        Ok(WeightParams { alpha, t })
    }

    /// Parses decimal or `p/q` literals at the precision of `ctx`.
    pub fn parse(alpha: &str, t: &str, ctx: &PrecisionContext) -> Result<Self> {
        WeightParams::new(ctx.parse(alpha)?, ctx.parse(t)?)
    }

    /// Convenience for rational parameter points `(a_num/a_den, t_num/t_den)`.
    pub fn rational(
        alpha: (i64, i64),
        t: (i64, i64),
        ctx: &PrecisionContext,
    ) -> Result<Self> {
        WeightParams::new(ctx.ratio(alpha.0, alpha.1), ctx.ratio(t.0, t.1))
    }

    pub fn alpha(&self) -> &BigReal {
        &self.alpha
    }

    pub fn t(&self) -> &BigReal {
        &self.t
    }

    /// Same α at a different t.
    pub fn with_t(&self, t: BigReal) -> Result<Self> {
        WeightParams::new(self.alpha.clone(), t)
    }

    /// α − 1 at the same t; no positivity check since only moments use it.
    pub(crate) fn alpha_minus_one(&self) -> BigReal {
        &self.alpha - 1
    }

    /// Both values rounded into `ctx`.
    pub fn at(&self, ctx: &PrecisionContext) -> (BigReal, BigReal) {
        (ctx.adopt(&self.alpha), ctx.adopt(&self.t))
    }

    /// `w(x,t)` at a quadrature node on `[−1, 1]`, with `1 − x²` formed from
    /// the endpoint distances.
    pub fn weight_at(&self, p: &Abscissa, ctx: &PrecisionContext) -> BigReal {
        let (alpha, t) = self.at(ctx);
        weight_from_gap(&one_minus_x2(p, ctx), &alpha, &t, ctx)
    }

    /// `v(z) = t/(1−z²) − α ln(1−z²)`.
    pub fn potential(&self, z: &BigReal, ctx: &PrecisionContext) -> BigReal {
        let (alpha, t) = self.at(ctx);
        let d = 1 - ctx.adopt(z).square();
        &t / &d - alpha * d.ln()
    }

    /// `v′(z) = 2αz/(1−z²) + 2tz/(1−z²)²`.
    pub fn potential_derivative(&self, z: &BigReal, ctx: &PrecisionContext) -> BigReal {
        let (alpha, t) = self.at(ctx);
        let z = ctx.adopt(z);
        let d = 1 - z.square();
        (alpha * &z).mul_pow2(1) / &d + (t * &z).mul_pow2(1) / d.square()
    }
}

/// `R_0(t) = 2t U(1/2, 1−α, t) / U(1/2, −α, t)`, independent of any moment table.
pub fn big_r_zero_closed_form(params: &WeightParams, ctx: &PrecisionContext) -> Result<BigReal> {
    let (alpha, t) = params.at(ctx);
    let half = ctx.ratio(1, 2);
    let num = kummer_u(&half, &(1 - &alpha), &t, ctx)?;
    let den = kummer_u(&half, &(-&alpha), &t, ctx)?;
    Ok(t.mul_pow2(1) * num / den)
}

/// `1 − x²` at a node on `[−1, 1]` as `(x + 1)(1 − x)`.
pub(crate) fn one_minus_x2(p: &Abscissa, ctx: &PrecisionContext) -> BigReal {
    match (&p.from_lo, &p.from_hi) {
        (Some(a), Some(b)) => a * b,
        _ => 1 - ctx.adopt(&p.x).square(),
    }
}

pub(crate) fn weight_from_gap(
    gap: &BigReal,
    alpha: &BigReal,
    t: &BigReal,
    ctx: &PrecisionContext,
) -> BigReal {
    if !gap.is_positive() {
        return ctx.zero();
    }
    (alpha * gap.ln() - t / gap).exp()
}
