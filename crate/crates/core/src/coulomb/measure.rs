use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::orthopoly::WeightParams;
use crate::precision::{integrate, real_cubic_root, Abscissa, BigReal, PrecisionContext};
use crate::relations::{RelationId, ResidualReport};

/// Single-interval equilibrium measure on `(−b, b)` for `n` (continuous)
/// particles in the potential `v(x) = t/(1−x²) − α ln(1−x²)`.
#[derive(Clone, Debug)]
pub struct EquilibriumMeasure {
    pub params: WeightParams,
    pub n: BigReal,
    /// `u = √(1−b²)`, the real root of `2(n+α)u³ + (t−2α)u² − t`.
    pub u: BigReal,
    pub b: BigReal,
    /// Lagrange multiplier.
    pub a_mult: BigReal,
    /// Cardano discriminant combination; `None` when its radicand is negative.
    pub xi: Option<BigReal>,
}

/// Support and multiplier for `n > 0`.
pub fn solve_support(
    params: &WeightParams,
    n: &BigReal,
    ctx: &PrecisionContext,
) -> Result<EquilibriumMeasure> {
    let n = ctx.adopt(n);
    if !n.is_positive() {
        return Err(Error::domain("the particle number must be positive"));
    }
    let (alpha, t) = params.at(ctx);
    let c3 = (&n + &alpha).mul_pow2(1);
    let c2 = &t - alpha.mul_pow2(1);
    let u = real_cubic_root(&c3, &c2, &(-&t), ctx)?;
    let b = (1 - u.square()).sqrt();
    let a_mult = &t / &u - (&n * (b.mul_pow2(-1)).ln()).mul_pow2(1)
        + (&alpha * (ctx.int(2) / (1 + &u)).ln()).mul_pow2(1);

    let radicand = &t * 3 * (&t * &n * (&n + alpha.mul_pow2(1)) * 27
        - (&t - &alpha * 8) * (&t + &alpha).square());
    let xi = if radicand.is_negative() {
        None
    } else {
        Some(
            &alpha.square() * &alpha * 8
                + &t * 6 * (n.square() * 9 + &n * &alpha * 18 + alpha.square() * 7)
                + t.square() * &alpha * 6
                - t.square() * &t
                + (&n + &alpha) * 6 * radicand.sqrt(),
        )
    };
    Ok(EquilibriumMeasure {
        params: params.clone(),
        n,
        u,
        b,
        a_mult,
        xi,
    })
}

impl EquilibriumMeasure {
    pub fn context(&self) -> PrecisionContext {
        PrecisionContext::new(self.u.bits()).expect("valid precision")
    }

    /// `u` from the closed-form root `[2α−t+ξ^{1/3}+(2α−t)²/ξ^{1/3}]/(6(n+α))`.
    pub fn u_from_xi(&self) -> Option<BigReal> {
        let ctx = self.context();
        let (alpha, t) = self.params.at(&ctx);
        let xi = self.xi.as_ref()?;
        let k = alpha.mul_pow2(1) - &t;
        let c = xi.cbrt();
        Some((&k + &c + k.square() / &c) / ((&self.n + &alpha) * 6))
    }

    fn density_from_gap(&self, x: &BigReal, edge_gap: &BigReal) -> BigReal {
        let ctx = self.context();
        let (alpha, t) = self.params.at(&ctx);
        let b2 = self.b.square();
        let x2 = x.square();
        let one_b2 = self.u.square();
        let one_x2 = 1 - &x2;
        let bracket =
            t.mul_pow2(1) - &b2 * &t * (1 + &x2) + (&alpha * &one_b2 * &one_x2).mul_pow2(1);
        edge_gap.sqrt() * bracket / (ctx.pi().mul_pow2(1) * &one_b2 * &self.u * one_x2.square())
    }

    /// The density σ(x) for `|x| ≤ b`.
    pub fn density(&self, x: &BigReal) -> Result<BigReal> {
        let ctx = self.context();
        let x = ctx.adopt(x);
        if x.abs() > self.b {
            return Err(Error::domain(format!(
                "density is supported on |x| <= b = {}, got {}",
                self.b.to_decimal(20),
                x.to_decimal(20)
            )));
        }
        let gap = (&self.b - &x) * (&self.b + &x);
        Ok(self.density_from_gap(&x, &gap))
    }

    /// σ at a quadrature node on `[lo, hi] ⊂ [−b, b]`, forming `b² − y²` from
    /// endpoint distances when an endpoint is ±b.
    fn density_at_node(&self, p: &Abscissa, lo_is_edge: bool, hi_is_edge: bool) -> BigReal {
        let to_minus_b = match (&p.from_lo, lo_is_edge) {
            (Some(d), true) => d.clone(),
            _ => &self.b + &p.x,
        };
        let to_plus_b = match (&p.from_hi, hi_is_edge) {
            (Some(d), true) => d.clone(),
            _ => &self.b - &p.x,
        };
        if !to_minus_b.is_positive() || !to_plus_b.is_positive() {
            return self.context().zero();
        }
        self.density_from_gap(&p.x, &(to_minus_b * to_plus_b))
    }

    /// `∫ σ(x) dx` over the support.
    pub fn mass(&self) -> Result<BigReal> {
        let ctx = self.context();
        integrate(
            |p| self.density_at_node(p, true, true),
            -&self.b,
            self.b.clone(),
            &ctx,
        )
    }

    /// `∫ ln|x − y| σ(y) dy`, split at `y = x`.
    pub fn log_potential(&self, x: &BigReal) -> Result<BigReal> {
        let ctx = self.context();
        let x = ctx.adopt(x);
        if x.abs() >= self.b {
            return Err(Error::domain("log potential is evaluated inside the support"));
        }
        let left = integrate(
            |p| {
                let d = p.from_hi.as_ref().expect("finite");
                if d.is_zero() {
                    return ctx.zero();
                }
                d.ln() * self.density_at_node(p, true, false)
            },
            -&self.b,
            x.clone(),
            &ctx,
        )?;
        let right = integrate(
            |p| {
                let d = p.from_lo.as_ref().expect("finite");
                if d.is_zero() {
                    return ctx.zero();
                }
                d.ln() * self.density_at_node(p, false, true)
            },
            x,
            self.b.clone(),
            &ctx,
        )?;
        Ok(left + right)
    }

    /// `P∫ σ(y)/(x − y) dy` by subtracting σ(x).
    pub fn cauchy_transform(&self, x: &BigReal) -> Result<BigReal> {
        let ctx = self.context();
        let x = ctx.adopt(x);
        if x.abs() >= self.b {
            return Err(Error::domain("principal value is evaluated inside the support"));
        }
        let sx = self.density(&x)?;
        let smooth = integrate(
            |p| {
                let d = &x - &p.x;
                if d.is_zero() {
                    return ctx.zero();
                }
                (self.density_at_node(p, true, true) - &sx) / d
            },
            -&self.b,
            self.b.clone(),
            &ctx,
        )?;
        Ok(smooth + sx * ((&self.b + &x) / (&self.b - &x)).ln())
    }
}

/// Free-function form of [`EquilibriumMeasure::density`].
pub fn density(measure: &EquilibriumMeasure, x: &BigReal) -> Result<BigReal> {
    measure.density(x)
}

/// At each sample, `v(x) − 2∫ln|x−y|σ(y)dy − A` (scaled by `|A|`) and
/// `v′(x) − 2P∫σ(y)/(x−y)dy` (scaled by `|v′| + |2P∫| + n`; both terms vanish
/// at the origin).
pub fn check_equilibrium(
    measure: &EquilibriumMeasure,
    x_samples: &[BigReal],
) -> Result<Vec<ResidualReport>> {
    let ctx = measure.context();
    let n_label = measure.n.to_f64().round().max(0.0) as usize;
    let mut out = Vec::with_capacity(2 * x_samples.len());
    for x in x_samples {
        let x = ctx.adopt(x);
        let v = measure.params.potential(&x, &ctx);
        let lp = measure.log_potential(&x)?.mul_pow2(1);
        let residual = &v - &lp - &measure.a_mult;
        out.push(
            ResidualReport::new(
                RelationId::Equilibrium,
                n_label,
                &measure.params,
                residual,
                measure.a_mult.abs(),
            )
            .at_z(&x),
        );
        let dv = measure.params.potential_derivative(&x, &ctx);
        let ct = measure.cauchy_transform(&x)?.mul_pow2(1);
        let scale = dv.abs() + ct.abs() + &measure.n;
        out.push(
            ResidualReport::new(
                RelationId::SingularEquilibrium,
                n_label,
                &measure.params,
                dv - ct,
                scale,
            )
            .at_z(&x),
        );
    }
    Ok(out)
}

/// `F[σ] = ∫σv − ∬σ(x) ln|x−y| σ(y) dx dy` by nested quadrature.
///
/// The inner log potential runs 64 bits above the working precision so that
/// its rounding noise stays below the outer convergence test.
pub fn free_energy(measure: &EquilibriumMeasure, ctx: &PrecisionContext) -> Result<BigReal> {
    let outer_ctx = measure.context();
    let fine_ctx = PrecisionContext::new(outer_ctx.bits() + 64)?;
    let fine = solve_support(&measure.params, &measure.n, &fine_ctx)?;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let value = integrate(
        |p| {
            let s = measure.density_at_node(p, true, true);
            if s.is_zero() || p.x.abs() >= measure.b || failure.borrow().is_some() {
                return outer_ctx.zero();
            }
            match fine.log_potential(&p.x) {
                Ok(lp) => s * (measure.params.potential(&p.x, &outer_ctx) - outer_ctx.adopt(&lp)),
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    outer_ctx.zero()
                }
            }
        },
        -&measure.b,
        measure.b.clone(),
        &outer_ctx,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(ctx.adopt(&value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn measure(alpha: (i64, i64), t: (i64, i64), n: i64, bits: u32) -> EquilibriumMeasure {
        let c = PrecisionContext::new(bits).unwrap();
        let w = WeightParams::rational(alpha, t, &c).unwrap();
        solve_support(&w, &c.int(n), &c).unwrap()
    }

    #[test]
    fn support_reference_value() {
        let m = measure((1, 1), (1, 1), 10, 256);
        let want = m
            .context()
            .parse("0.372695874639363764146826979476321590770901529699620086094292")
            .unwrap();
        assert!((&m.u - &want).abs() < m.context().pow2(-190));
        assert!((m.u.square() + m.b.square() - 1).abs() < m.context().pow2(-250));
    }

    #[test]
    fn degenerate_cubic_when_t_is_two_alpha() {
        let m = measure((1, 2), (1, 1), 7, 256);
        let c = m.context();
        let want = (c.one() / (c.ratio(15, 2).mul_pow2(1))).cbrt();
        assert!((&m.u - &want).abs() < c.pow2(-240));
    }

    #[test]
    fn closed_form_root_agrees() {
        for (a, t, n) in [((1, 1), (1, 1), 10), ((1, 2), (5, 2), 3), ((2, 1), (1, 2), 40)] {
            let m = measure(a, t, n, 256);
            let alt = m.u_from_xi().unwrap();
            assert!(((&alt - &m.u) / &m.u).abs() < m.context().pow2(-200));
        }
    }

    #[test]
    fn u_increases_with_t() {
        let c = PrecisionContext::new(128).unwrap();
        let mut prev = c.zero();
        for k in 1..8 {
            let w = WeightParams::rational((1, 1), (k, 2), &c).unwrap();
            let m = solve_support(&w, &c.int(10), &c).unwrap();
            assert!(m.u > prev);
            prev = m.u;
        }
    }

    #[test]
    fn density_shape() {
        let m = measure((1, 1), (1, 1), 10, 256);
        let c = m.context();
        assert!(m.density(&m.b).unwrap().is_zero());
        assert!(m.density(&-&m.b).unwrap().is_zero());
        assert!(m.density(&(&m.b + c.pow2(-100))).is_err());
        let (alpha, t) = m.params.at(&c);
        let b2 = m.b.square();
        let one_b2 = 1 - &b2;
        let at0 = &m.b * (t.mul_pow2(1) - &b2 * &t + (&alpha * &one_b2).mul_pow2(1))
            / (c.pi().mul_pow2(1) * &one_b2 * one_b2.sqrt());
        assert!((m.density(&c.zero()).unwrap() - at0).abs() < c.pow2(-240));
    }

    #[test]
    fn normalization_and_equilibrium() {
        let m = measure((1, 1), (1, 1), 10, 256);
        let c = m.context();
        let gap = ((m.mass().unwrap() - 10) / 10).abs();
        assert!(gap < c.parse("1e-30").unwrap(), "{gap:?}");
        let xs = vec![c.zero(), c.ratio(1, 3), c.ratio(-1, 3)];
        let reports = check_equilibrium(&m, &xs).unwrap();
        for r in &reports {
            assert!(r.log10_relative() < -20.0, "{} {:?}", r.relation_id, r.z);
        }
        let plus = &reports[2].residual;
        let minus = &reports[4].residual;
        assert!((plus - minus).abs() < c.parse("1e-30").unwrap());
    }

    #[test]
    fn free_energy_n_derivative_is_the_multiplier() {
        let c = PrecisionContext::new(128).unwrap();
        let w = WeightParams::rational((1, 1), (1, 1), &c).unwrap();
        let n0 = c.int(10);
        let d = crate::precision::central_derivative_with_step(
            |n| free_energy(&solve_support(&w, n, &c)?, &c),
            &n0,
            &c.pow2(-6),
            crate::precision::DerivativeOrder::First,
            &c,
        )
        .unwrap();
        let a = solve_support(&w, &n0, &c).unwrap().a_mult;
        let rel = ((d - &a) / &a).abs();
        assert!(rel < c.parse("1e-10").unwrap(), "{rel:?}");
    }

    /// F − (series without C₀) settles to the constant C₀; the difference
    /// between two n-values must then fall at the omitted n^{−1} rate.
    #[test]
    fn free_energy_matches_its_expansion() {
        use crate::coulomb::{expansion_eval, ExpansionSeries, SeriesKind, C0_FREE};
        let c = PrecisionContext::new(128).unwrap();
        let w = WeightParams::rational((1, 1), (1, 1), &c).unwrap();
        let s = ExpansionSeries::new(SeriesKind::FSeries, &w, &c).with_constant(C0_FREE, c.zero());
        let gap = |n: i64| {
            let n = c.int(n);
            free_energy(&solve_support(&w, &n, &c).unwrap(), &c).unwrap()
                - expansion_eval(&s, &n, 2).unwrap()
        };
        let (g100, g400) = (gap(100), gap(400));
        assert!((g400 - g100).abs() < c.ratio(1, 100));
    }
}
