use super::{RelationId, ResidualReport, Terms};
use crate::error::{Error, Result};
use crate::orthopoly::RecurrenceTable;
use crate::precision::BigReal;

fn need(cond: bool, what: &'static str, n: usize, max: usize) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what,
            index: n,
            max,
        })
    }
}

/// The six identities from the compatibility conditions at degree `n`.
/// (s21), (s2p1) and (s2p2) involve `R_{n−1}` and are skipped at `n = 0`.
pub fn check_compatibility(table: &RecurrenceTable, n: usize) -> Result<Vec<ResidualReport>> {
    need(n + 2 <= table.n_max, "compatibility degree", n, table.n_max.saturating_sub(2))?;
    let ctx = table.context();
    let (alpha, t) = table.alpha_t();
    let w = &table.params;
    let two_alpha = alpha.mul_pow2(1);
    let ni = n as i32;
    let nn = ctx.int(n as i64);
    let two_t = t.mul_pow2(1);
    let r = &table.r;
    let rr = &table.big_r;
    let beta = &table.beta;
    let mut out = Vec::with_capacity(6);

    let mut s1 = Terms::new(&ctx);
    s1.push(r[n + 1].clone())
        .push(r[n].clone())
        .push(-&rr[n])
        .push(two_t.clone());
    out.push(s1.report(RelationId::S1, n, w));

    if n >= 1 {
        let mut s21 = Terms::new(&ctx);
        s21.push(r[n + 1].clone())
            .push(-&r[n])
            .push(-(&beta[n + 1] * &rr[n + 1]))
            .push(&beta[n] * &rr[n - 1]);
        out.push(s21.report(RelationId::S21, n, w));
    }

    let mut s22 = Terms::new(&ctx);
    s22.push(r[n + 1].clone())
        .push(-&r[n])
        .push(ctx.int(-1))
        .push(-((&two_alpha + (2 * ni - 1)) * &beta[n]))
        .push((&two_alpha + (2 * ni + 3)) * &beta[n + 1]);
    out.push(s22.report(RelationId::S22, n, w));

    if n >= 1 {
        let mut s2p1 = Terms::new(&ctx);
        s2p1.push(r[n].square())
            .push(&two_t * &r[n])
            .push(-(&beta[n] * &rr[n] * &rr[n - 1]));
        out.push(s2p1.report(RelationId::S2P1, n, w));

        let mut s2p2 = Terms::new(&ctx);
        s2p2.push(r[n].square())
            .push((&t - &nn - &alpha).mul_pow2(1) * &r[n])
            .push(-(&nn * &two_t))
            .push((&two_alpha + (2 * ni + 1)) * &beta[n] * &rr[n - 1])
            .push((&two_alpha + (2 * ni - 1)) * &beta[n] * &rr[n]);
        out.push(s2p2.report(RelationId::S2P2, n, w));
    }

    let mut s2p3 = Terms::new(&ctx);
    s2p3.push(&nn * (&nn + &two_alpha - &two_t))
        .push(-((&nn + &alpha).mul_pow2(1) * &r[n]));
    for rj in &rr[..n] {
        s2p3.push(rj.clone());
    }
    s2p3.push(-((&two_alpha + (2 * ni + 1)) * (&two_alpha + (2 * ni - 1)) * &beta[n]));
    out.push(s2p3.report(RelationId::S2P3, n, w));
    Ok(out)
}

/// Residual of the squared second-order difference equation for β_n,
/// `LHS² − RHS`, scaled by `|LHS²| + |RHS|`.
pub fn residual_beta_difference(table: &RecurrenceTable, n: usize) -> Result<ResidualReport> {
    need(
        n >= 1 && n < table.n_max,
        "beta difference degree",
        n,
        table.n_max.saturating_sub(1),
    )?;
    let ctx = table.context();
    let (alpha, t) = table.alpha_t();
    let two_alpha = alpha.mul_pow2(1);
    let ni = n as i32;
    let m = ctx.int(n as i64) + &alpha;
    let m2 = m.square();
    let b = &table.beta[n];
    let bm = (&two_alpha + (2 * ni - 3)) * &table.beta[n - 1];
    let bp = (&two_alpha + (2 * ni + 3)) * &table.beta[n + 1];
    let c_plus = &two_alpha + (2 * ni + 1);
    let c_minus = &two_alpha + (2 * ni - 1);
    let tt = &t * (&t - &two_alpha);
    let b2 = b.square();

    let lhs_inner = (&m2 * 68 - 9) * &b2 * b
        + (12 - &m2 * 80 + (&alpha * 14 + (14 * ni + 5)) * &bm + (&alpha * 14 + (14 * ni - 5)) * &bp)
            * &b2
        + (&m2 * 24 + tt.mul_pow2(2) - 3 - (&c_plus * &bm).mul_pow2(1) - (&c_minus * &bp).mul_pow2(1)
            + &bm * &bp)
            * b
        - (&m2 - &t * &alpha).mul_pow2(1);
    let lhs = lhs_inner.square();

    let first = (&c_minus * &c_plus * &b2).mul_pow2(1)
        + (&c_plus * &bm + &c_minus * &bp - (&c_minus * &c_plus).mul_pow2(1)) * b
        + &m2
        + &tt;
    let second = (&m * 12 * &b2 + (&bm + &bp - &m * 8) * b + &m).square();
    let rhs = first.mul_pow2(2) * second;

    let mut terms = Terms::new(&ctx);
    terms.push(lhs).push(-rhs);
    Ok(terms.report(RelationId::Btd, n, &table.params))
}

/// Residual of the second-order difference equation for p(n,t).
pub fn residual_p_difference(table: &RecurrenceTable, n: usize) -> Result<ResidualReport> {
    need(
        n >= 1 && n < table.n_max,
        "p difference degree",
        n,
        table.n_max.saturating_sub(1),
    )?;
    let ctx = table.context();
    let (alpha, t) = table.alpha_t();
    let two_alpha = alpha.mul_pow2(1);
    let ni = n as i32;
    let nn = ctx.int(n as i64);
    let p = &table.p[n];
    let pm = (&two_alpha + (2 * ni - 3)) * (&table.p[n - 1] - p);
    let pp = (&two_alpha + (2 * ni + 1)) * (p - &table.p[n + 1]);
    let two_t = t.mul_pow2(1);
    let x = &nn + p.mul_pow2(1) - &pp;
    let x2 = x.square();
    // n − 1 + 2t − p̃(n−1) and n + α − t − p̃(n+1) recur
    let u = &nn - 1 + &two_t - &pm;
    let v = &nn + &alpha - &t - &pp;
    let nt2 = &nn * &two_t;

    let mut terms = Terms::new(&ctx);
    terms.push(&x2 * &x);
    terms.push(&x2 * (&nn - 2 + t.mul_pow2(2) - &pm + &pp));
    terms.push(
        -(x.mul_pow2(1)
            * (nn.square() - &nn * (1 - &alpha) - &alpha + &two_t - t.square().mul_pow2(1)
                - &pm * &v
                - (&nn - 1 + &two_t) * &pp)),
    );
    terms.push(-(&u * (&nt2 - &pp * &u)));
    terms.push(p.square().mul_pow2(2) * &pp);
    terms.push(p.mul_pow2(1) * (&x2 + (&pp * &u).mul_pow2(1) - (&x * &v).mul_pow2(1) - &nt2));
    Ok(terms.report(RelationId::Pnd, n, &table.params))
}

fn sigma_f(n: i32, two_alpha: &BigReal, sm: &BigReal, s: &BigReal, sp: &BigReal) -> BigReal {
    (two_alpha + (2 * n + 1)) * sm - (two_alpha + (2 * n - 1)) * sp - sm * sp - s.square()
        + s * (sm + sp - 2)
}

fn sigma_g(n: i32, two_alpha: &BigReal, sm: &BigReal, s: &BigReal, sp: &BigReal) -> BigReal {
    (two_alpha + (2 * n - 1) + sm - s) * (two_alpha + (2 * n + 1) + s - sp)
}

/// Residual of the second-order difference equation for σ_n.
pub fn residual_sigma_difference(table: &RecurrenceTable, n: usize) -> Result<ResidualReport> {
    need(
        n >= 1 && n < table.n_max,
        "sigma difference degree",
        n,
        table.n_max.saturating_sub(1),
    )?;
    let ctx = table.context();
    let (alpha, t) = table.alpha_t();
    let two_alpha = alpha.mul_pow2(1);
    let ni = n as i32;
    let nn = ctx.int(n as i64);
    let (sm, s, sp) = (&table.sigma[n - 1], &table.sigma[n], &table.sigma[n + 1]);
    let f = sigma_f(ni, &two_alpha, sm, s, sp);
    let g = sigma_g(ni, &two_alpha, sm, s, sp);
    let m = &nn + &alpha;
    let y = (&nn * (&nn + &two_alpha - t.mul_pow2(1)) - s) * &f
        - (&nn * &t).mul_pow2(1) * (&two_alpha + (2 * ni - 1)) * (&two_alpha + (2 * ni + 1));

    let mut terms = Terms::new(&ctx);
    terms.push(y.square());
    terms.push((&t * &m).mul_pow2(2) * &g * &y);
    terms.push(
        -(m.square().mul_pow2(2) * (sm - s) * (s - sp) * (nn.square() + &nn * &two_alpha - s) * &g),
    );
    Ok(terms.report(RelationId::Snd, n, &table.params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::WeightParams;
    use crate::precision::PrecisionContext;

    fn table(alpha: (i64, i64), t: (i64, i64), n_max: usize, bits: u32) -> RecurrenceTable {
        let c = PrecisionContext::new(bits).unwrap();
        let w = WeightParams::rational(alpha, t, &c).unwrap();
        RecurrenceTable::compute(&w, n_max, &c).unwrap()
    }

    fn below(r: &ResidualReport, digits: i32) {
        assert!(
            r.log10_relative() <= -(digits as f64),
            "{} n={} log10 rel {}",
            r.relation_id,
            r.n,
            r.log10_relative()
        );
    }

    #[test]
    fn compatibility_at_low_degrees() {
        let tb = table((1, 1), (1, 1), 8, 512);
        let reports = check_compatibility(&tb, 0).unwrap();
        assert_eq!(reports.len(), 3);
        for r in &reports {
            below(r, 100);
        }
        let s2p3 = reports.iter().find(|r| r.relation_id == RelationId::S2P3).unwrap();
        assert!(s2p3.residual.is_zero());
        for n in 1..=6 {
            let reports = check_compatibility(&tb, n).unwrap();
            assert_eq!(reports.len(), 6);
            for r in &reports {
                below(r, 100);
                assert!(r.pass);
            }
        }
        assert!(check_compatibility(&tb, 7).is_err());
    }

    #[test]
    fn difference_equations() {
        let tb = table((1, 1), (1, 1), 6, 512);
        below(&residual_beta_difference(&tb, 2).unwrap(), 80);
        below(&residual_p_difference(&tb, 2).unwrap(), 80);
        below(&residual_p_difference(&tb, 1).unwrap(), 80);
        below(&residual_sigma_difference(&tb, 3).unwrap(), 80);
        below(&residual_sigma_difference(&tb, 1).unwrap(), 80);
        assert!(residual_beta_difference(&tb, 0).is_err());
        assert!(residual_beta_difference(&tb, 6).is_err());

        let tb = table((1, 2), (5, 2), 11, 512);
        below(&residual_beta_difference(&tb, 10).unwrap(), 80);
        let tb = table((2, 1), (1, 2), 21, 512);
        below(&residual_p_difference(&tb, 20).unwrap(), 80);
        let tb = table((1, 2), (1, 1), 16, 512);
        below(&residual_sigma_difference(&tb, 15).unwrap(), 80);
    }

    #[test]
    fn residuals_shrink_with_precision() {
        let lo = table((1, 1), (1, 1), 4, 256);
        let hi = table((1, 1), (1, 1), 4, 512);
        let a = residual_beta_difference(&lo, 2).unwrap().log10_relative();
        let b = residual_beta_difference(&hi, 2).unwrap().log10_relative();
        // 2^200 ≈ 10^60
        assert!(a - b >= 60.0, "{a} {b}");
    }

    #[test]
    fn telescoped_s22_reproduces_r() {
        let tb = table((3, 2), (2, 1), 10, 256);
        let ctx = tb.context();
        let (alpha, _) = tb.alpha_t();
        let two_alpha = alpha.mul_pow2(1);
        let mut acc = ctx.zero();
        for n in 0..9 {
            let ni = n as i32;
            acc += 1 + (&two_alpha + (2 * ni - 1)) * &tb.beta[n]
                - (&two_alpha + (2 * ni + 3)) * &tb.beta[n + 1];
            let gap = (&acc - &tb.r[n + 1]).abs();
            assert!(gap < ctx.pow2(-230) * (acc.abs() + 1), "n={n}");
        }
    }
}
