//! t-differential relations, checked with five-point stencils over full
//! pipeline re-runs at neighbouring t.

mod bundle;

pub use bundle::{Jet, StencilBundle};

use crate::error::{Error, Result};
use crate::orthopoly::{big_r_zero_closed_form, WeightParams};
use crate::precision::{stencil_combination, BigReal, DerivativeOrder, PrecisionContext};
use crate::relations::{RelationId, ResidualReport, Terms};

/// Parameters of the Painlevé V equation satisfied by
/// `W_n = (2n+1+2α+R_n)/(2n+1+2α)`.
#[derive(Clone, Debug)]
pub struct PainleveVParams {
    pub mu1: BigReal,
    pub mu2: BigReal,
    pub mu3: BigReal,
    pub mu4: BigReal,
}

impl PainleveVParams {
    pub fn new(n: usize, alpha: &BigReal, ctx: &PrecisionContext) -> Self {
        let alpha = ctx.adopt(alpha);
        let c = alpha.mul_pow2(1) + (2 * n as i32 + 1);
        PainleveVParams {
            mu1: c.square().mul_pow2(-3),
            mu2: ctx.ratio(-1, 8),
            mu3: alpha,
            mu4: ctx.ratio(-1, 2),
        }
    }
}

fn need_degree(bundle: &StencilBundle, n: usize, min: usize, extra: usize) -> Result<()> {
    if n < min || n + extra > bundle.n_max {
        return Err(Error::OutOfRange {
            what: "stencil degree",
            index: n,
            max: bundle.n_max.saturating_sub(extra),
        });
    }
    Ok(())
}

/// `2t (ln h_n)′ = −R_n`, `2t p′ = r_n − β_n R_n` and, for `n ≥ 1`,
/// `2t β_n′ = β_n (R_{n−1} − R_n)`.
pub fn check_t_evolution(bundle: &StencilBundle, n: usize) -> Result<Vec<ResidualReport>> {
    need_degree(bundle, n, 0, 1)?;
    let ctx = bundle.context();
    let tb = bundle.center();
    let (_, t) = tb.alpha_t();
    let two_t = t.mul_pow2(1);
    let w = &tb.params;
    let mut out = Vec::with_capacity(3);

    let ln_h = bundle.jet(|x| Ok(x.h(n)?.ln()))?;
    let mut eq1 = Terms::new(&ctx);
    eq1.push(&two_t * &ln_h.d1).push(tb.big_r[n].clone());
    out.push(eq1.report(RelationId::Eq1, n, w));

    let p = bundle.jet(|x| Ok(x.p(n)?.clone()))?;
    let mut pnt = Terms::new(&ctx);
    pnt.push(&two_t * &p.d1)
        .push(-&tb.r[n])
        .push(&tb.beta[n] * &tb.big_r[n]);
    out.push(pnt.report(RelationId::Pnt, n, w));

    if n >= 1 {
        let beta = bundle.jet(|x| Ok(x.beta(n)?.clone()))?;
        let mut eq2 = Terms::new(&ctx);
        eq2.push(&two_t * &beta.d1)
            .push(-(&tb.beta[n] * &tb.big_r[n - 1]))
            .push(&tb.beta[n] * &tb.big_r[n]);
        out.push(eq2.report(RelationId::Eq2, n, w));
    }
    Ok(out)
}

/// The coupled Riccati pair for (r_n, R_n).
pub fn check_riccati(bundle: &StencilBundle, n: usize) -> Result<Vec<ResidualReport>> {
    need_degree(bundle, n, 1, 1)?;
    let ctx = bundle.context();
    let tb = bundle.center();
    let (alpha, t) = tb.alpha_t();
    let two_t = t.mul_pow2(1);
    let nn = ctx.int(n as i64);
    let c = alpha.mul_pow2(1) + (2 * n as i32 + 1);
    let k = (&nn + &alpha + 1 - &t).mul_pow2(1);
    let r = &tb.r[n];
    let big_r = &tb.big_r[n];
    let rj = bundle.jet(|x| Ok(x.r(n)?.clone()))?;
    let bj = bundle.jet(|x| Ok(x.big_r(n)?.clone()))?;

    let mut ric1 = Terms::new(&ctx);
    ric1.push(&two_t * &rj.d1)
        .push(-(&nn * &two_t))
        .push(r.square())
        .push(-(&k * r))
        .push((&c * (r.square() + &two_t * r)).mul_pow2(1) / big_r);

    let mut ric2 = Terms::new(&ctx);
    ric2.push(&two_t * &bj.d1)
        .push(-big_r.square())
        .push(-(&k * big_r))
        .push((r * (&c + big_r)).mul_pow2(1))
        .push(&two_t * &c);

    Ok(vec![
        ric1.report(RelationId::Ric1, n, &tb.params),
        ric2.report(RelationId::Ric2, n, &tb.params),
    ])
}

/// Residual of the second-order ODE for R_n from its stencil jet.
fn big_r_ode(
    n: usize,
    alpha: &BigReal,
    t: &BigReal,
    jet: &Jet,
    ctx: &PrecisionContext,
) -> Terms {
    let c = alpha.mul_pow2(1) + (2 * n as i32 + 1);
    let nn = ctx.int(n as i64);
    let (r, r1, r2) = (&jet.value, &jet.d1, &jet.d2);
    let t2 = t.square();
    let r_sq = r.square();
    let r_cu = &r_sq * r;
    let r_c = r * (&c + r);
    let mut terms = Terms::new(ctx);
    terms
        .push((&t2 * &r_c * r2).mul_pow2(3))
        .push(-((&t2 * (c.mul_pow2(1) + r * 3)) * r1.square()).mul_pow2(2))
        .push((t * &r_c * r1).mul_pow2(3))
        .push(-(&r_cu * &r_sq))
        .push(-(&c * &r_sq.square()).mul_pow2(1))
        .push(
            -(((&nn + alpha) * (&nn + 1 + alpha) - t * (t - alpha.mul_pow2(1))) * &r_cu)
                .mul_pow2(2),
        )
        .push((t * &c * (t - alpha) * &r_sq).mul_pow2(4))
        .push((t * c.square() * (t * 5 - alpha.mul_pow2(1)) * r).mul_pow2(2))
        .push((&t2 * c.square() * &c).mul_pow2(3));
    terms
}

/// The second-order ODEs for R_n and r_n, scaled by the largest monomial.
pub fn check_second_order_odes(bundle: &StencilBundle, n: usize) -> Result<Vec<ResidualReport>> {
    need_degree(bundle, n, 1, 1)?;
    let ctx = bundle.context();
    let tb = bundle.center();
    let (alpha, t) = tb.alpha_t();
    let bj = bundle.jet(|x| Ok(x.big_r(n)?.clone()))?;
    let rn = big_r_ode(n, &alpha, &t, &bj, &ctx);

    let rj = bundle.jet(|x| Ok(x.r(n)?.clone()))?;
    let nn = ctx.int(n as i64);
    let (r, r1, r2) = (&rj.value, &rj.d1, &rj.d2);
    let t2 = t.square();
    let r_sq = r.square();
    let r_cu = &r_sq * r;
    let n2 = nn.square();
    let mut small = Terms::new(&ctx);
    small
        .push((&t2 * r * (t.mul_pow2(1) + r) * r2).mul_pow2(2))
        .push(-(&t2 * (&t + r) * r1.square()).mul_pow2(2))
        .push((&t * &r_sq * r1).mul_pow2(2))
        .push(-(&r_cu * &r_sq))
        .push(-((nn.mul_pow2(1) + alpha.mul_pow2(1) + &t * 5) * r_sq.square()))
        .push(-(&t * (&nn + &alpha + &t) * &r_cu).mul_pow2(3))
        .push(
            -(&t * ((&t + &alpha).square() + &nn * (t.mul_pow2(1) + &alpha) - 1) * &r_sq)
                .mul_pow2(2),
        )
        .push((&n2 * &t2 * r).mul_pow2(2))
        .push((&n2 * &t2 * &t).mul_pow2(2));

    Ok(vec![
        rn.report_max_scaled(RelationId::RnOde, n, &tb.params),
        small.report_max_scaled(RelationId::SmallRnOde, n, &tb.params),
    ])
}

fn painleve_v_terms(w: &Jet, t: &BigReal, pv: &PainleveVParams, ctx: &PrecisionContext) -> Terms {
    let (w0, w1, w2) = (&w.value, &w.d1, &w.d2);
    let wm1 = w0 - 1;
    let mut terms = Terms::new(ctx);
    terms
        .push(w2.clone())
        .push(-((w0 * 3 - 1) * w1.square() / (w0 * &wm1).mul_pow2(1)))
        .push(w1 / t)
        .push(-(wm1.square() / t.square() * (&pv.mu1 * w0 + &pv.mu2 / w0)))
        .push(-(&pv.mu3 * w0 / t))
        .push(-(&pv.mu4 * w0 * (w0 + 1) / &wm1));
    terms
}

/// Painlevé V for `W_n`, with derivatives from the stencil of R_n.
pub fn check_painleve_v(bundle: &StencilBundle, n: usize) -> Result<ResidualReport> {
    need_degree(bundle, n, 0, 1)?;
    let ctx = bundle.context();
    let tb = bundle.center();
    let (alpha, t) = tb.alpha_t();
    let c = alpha.mul_pow2(1) + (2 * n as i32 + 1);
    let jet = bundle.jet(|x| {
        let w = (&c + x.big_r(n)?) / &c;
        if w <= 1 {
            return Err(Error::Invariant(format!("W_{n} <= 1 on the stencil")));
        }
        Ok(w)
    })?;
    let pv = PainleveVParams::new(n, &alpha, &ctx);
    Ok(painleve_v_terms(&jet, &t, &pv, &ctx).report(RelationId::PainleveV, n, &tb.params))
}

/// Painlevé V at `n = 0` with `R_0 = 2t U(1/2, 1−α, t)/U(1/2, −α, t)` on
/// the stencil; no moment table is involved.
pub fn check_painleve_v_closed_form(
    params: &WeightParams,
    h: &BigReal,
    ctx: &PrecisionContext,
) -> Result<ResidualReport> {
    let (alpha, t) = params.at(ctx);
    let h = ctx.adopt(h);
    if !(&t - h.mul_pow2(1)).is_positive() {
        return Err(Error::domain("stencil reaches t <= 0; reduce the step"));
    }
    let c = alpha.mul_pow2(1) + 1;
    let mut w = Vec::with_capacity(5);
    for k in -2..=2 {
        let tk = params.with_t(&t + &h * k)?;
        let r0 = big_r_zero_closed_form(&tk, ctx)?;
        w.push((&c + r0) / &c);
    }
    let s = [&w[0], &w[1], &w[2], &w[3], &w[4]];
    let jet = Jet {
        d1: stencil_combination(s, &h, DerivativeOrder::First),
        d2: stencil_combination(s, &h, DerivativeOrder::Second),
        value: w[2].clone(),
    };
    let pv = PainleveVParams::new(0, &alpha, ctx);
    Ok(painleve_v_terms(&jet, &t, &pv, ctx).report(RelationId::PainleveV, 0, params))
}

/// The second-order second-degree ODE for σ_n, written `Q² − 4m²K·F² = 0`.
/// The scale is the larger of `(Σ|Q terms|)²` and `4m²|K|·(Σ|F terms|)²`, so
/// cancellation inside either bracket does not inflate the relative residual.
pub fn check_sigma_ode(bundle: &StencilBundle, n: usize) -> Result<ResidualReport> {
    need_degree(bundle, n, 1, 0)?;
    let ctx = bundle.context();
    let tb = bundle.center();
    let (a, t) = tb.alpha_t();
    let jet = bundle.jet(|x| Ok(x.sigma(n)?.clone()))?;
    let (s, s1, s2) = (&jet.value, &jet.d1, &jet.d2);
    let nn = ctx.int(n as i64);
    let m = &nn + &a;
    let m2 = m.square();
    let (n2, a2, t2) = (nn.square(), a.square(), t.square());
    let n3 = &n2 * &nn;
    let n4 = n2.square();
    let ta = &t + &a;

    let mut q = Terms::new(&ctx);
    q.push(t2.square() * s2.square())
        .push((&t2 * (&m2 + &t * (&a - s1)) * s2).mul_pow2(1))
        .push((&t2 * &t * s1.square() * s1).mul_pow2(1))
        .push(-(&t2 * (ta.square() - &nn * (&nn + a.mul_pow2(1)) * 3 - 1 + s.mul_pow2(2)) * s1.square()))
        .push(
            -(&t * (&n4 * 3
                + &n3 * &a * 12
                + &n2 * (&t2 + &t * &a * 4 + &a2 * 15 + 2)
                + (&nn * &a).mul_pow2(1) * (&t2 + &t * &a * 4 + &a2 * 3 + 2)
                + &a * (&t + a.mul_pow2(1)))
                * s1)
                .mul_pow2(1),
        )
        .push((&t * (&m2 * 3 + &t * (&t + a.mul_pow2(2))) * s * s1).mul_pow2(1))
        .push(
            -((n4.mul_pow2(1)
                + &n3 * &a * 8
                + n2.mul_pow2(1) * (&t2 + &t * &a * 3 + &a2 * 6)
                + (&nn * &a).mul_pow2(2) * &ta * (&t + a.mul_pow2(1))
                + (&a * ta.square() * &ta).mul_pow2(1))
                * s),
        )
        .push(n3.square().mul_pow2(1))
        .push(&n4 * &nn * &a * 12)
        .push((&t2 + &t * &a * 3 + &a2 * 14 + 1).mul_pow2(1) * &n4)
        .push(&n3 * &a * 8 * (&t2 + &t * &a * 3 + &a2 * 4 + 1))
        .push(
            &n2 * ((&t2 * &t * &a).mul_pow2(1)
                + (&a2 * 14 + 1) * &t2
                + (&t * &a).mul_pow2(1) * (&a2 * 15 + 2)
                + &a2 * 6 * (&a2 * 3 + 2)),
        )
        .push(
            &nn * ((&t2 * &t * &a2).mul_pow2(2)
                + (&t2 * &a).mul_pow2(1) * (&a2 * 6 + 1)
                + (&t * &a2).mul_pow2(2) * (&a2 * 3 + 2)
                + (&a2 * &a).mul_pow2(2) * (&a2 + 2)),
        )
        .push((&a2 * ta.square()).mul_pow2(1));

    let k = &m2 + &t * (&t + a.mul_pow2(1)) - (&t * s1).mul_pow2(1);
    let mut f = Terms::new(&ctx);
    f.push(&t2 * s2)
        .push(-(&t * (n2.mul_pow2(1) + (&nn * &a).mul_pow2(2) + 1 - s.mul_pow2(1)) * s1))
        .push(-((&m2 + &t * (&t + a.mul_pow2(1))) * s))
        .push(n4.clone())
        .push(&n3 * &a * 4)
        .push(&a * &ta)
        .push(&n2 * (&t2 + (&t * &a).mul_pow2(1) + &a2 * 5 + 1))
        .push((&nn * &a).mul_pow2(1) * (ta.square() + 1));

    let (q_sum, q_abs) = q.into_parts();
    let (f_sum, f_abs) = f.into_parts();
    let prefactor = m2.mul_pow2(2) * &k;
    let lhs = q_sum.square();
    let rhs = &prefactor * f_sum.square();
    let scale = q_abs.square().max(prefactor.abs() * f_abs.square());
    Ok(ResidualReport::new(RelationId::SigmaOde, n, &tb.params, lhs - rhs, scale))
}

/// `σ_n = 2t (ln D_n)′`, comparing (sig) values against the stencil.
pub fn check_sigma_definition(bundle: &StencilBundle, n: usize) -> Result<ResidualReport> {
    need_degree(bundle, n, 0, 0)?;
    let ctx = bundle.context();
    let tb = bundle.center();
    let (_, t) = tb.alpha_t();
    let jet = bundle.jet(|x| Ok(x.log_d(n)?.clone()))?;
    let mut terms = Terms::new(&ctx);
    terms.push(t.mul_pow2(1) * &jet.d1).push(-&tb.sigma[n]);
    Ok(terms.report(RelationId::SigmaDef, n, &tb.params))
}
