use super::moments::{build_moments, MomentTable};
use super::WeightParams;
use crate::error::{Error, Result};
use crate::precision::{with_escalation, BigReal, PrecisionContext};

/// Per-degree quantities for one parameter point.
///
/// Index ranges (all inclusive):
/// `h`, `beta`: `0..=n_max`; `log_d`, `p`: `0..=n_max+1`;
/// `r`, `sigma`: `0..=n_max`; `big_r`: `0..=n_max−1` (it needs `β_{n+1}`).
#[derive(Clone, Debug)]
pub struct RecurrenceTable {
    pub params: WeightParams,
    pub n_max: usize,
    /// Squared norms h_n.
    pub h: Vec<BigReal>,
    /// ln D_n = Σ_{j<n} ln h_j.
    pub log_d: Vec<BigReal>,
    /// β_n = h_n / h_{n−1}, β_0 = 0.
    pub beta: Vec<BigReal>,
    /// p(n,t) = −Σ_{j<n} β_j.
    pub p: Vec<BigReal>,
    /// r_n(t); empty until [`ladder_quantities`] runs.
    pub r: Vec<BigReal>,
    /// R_n(t); empty until [`ladder_quantities`] runs.
    pub big_r: Vec<BigReal>,
    /// σ_n(t); empty until [`sigma_values`] runs.
    pub sigma: Vec<BigReal>,
}

fn fetch<'a>(v: &'a [BigReal], n: usize, what: &'static str) -> Result<&'a BigReal> {
    v.get(n).ok_or(Error::OutOfRange {
        what,
        index: n,
        max: v.len().saturating_sub(1),
    })
}

impl RecurrenceTable {
    /// Full pipeline: moments, factorization, ladder quantities and σ_n,
    /// retrying at higher precision if the factorization breaks down.
    pub fn compute(
        params: &WeightParams,
        n_max: usize,
        ctx: &PrecisionContext,
    ) -> Result<RecurrenceTable> {
        with_escalation(ctx, |c| Self::compute_at(params, n_max, c))
    }

    /// As [`RecurrenceTable::compute`] without precision escalation.
    pub fn compute_at(
        params: &WeightParams,
        n_max: usize,
        ctx: &PrecisionContext,
    ) -> Result<RecurrenceTable> {
        if n_max == 0 {
            return Err(Error::domain("n_max must be at least 1"));
        }
        let moments = build_moments(params, 2 * n_max, ctx)?;
        let mut table = factor_hankel(&moments, n_max, ctx)?;
        ladder_quantities(&mut table)?;
        sigma_values(&mut table)?;
        Ok(table)
    }

    pub fn bits(&self) -> u32 {
        self.h[0].bits()
    }

    pub fn h(&self, n: usize) -> Result<&BigReal> {
        fetch(&self.h, n, "h_n")
    }

    pub fn log_d(&self, n: usize) -> Result<&BigReal> {
        fetch(&self.log_d, n, "ln D_n")
    }

    pub fn beta(&self, n: usize) -> Result<&BigReal> {
        fetch(&self.beta, n, "beta_n")
    }

    pub fn p(&self, n: usize) -> Result<&BigReal> {
        fetch(&self.p, n, "p(n)")
    }

    pub fn r(&self, n: usize) -> Result<&BigReal> {
        fetch(&self.r, n, "r_n")
    }

    pub fn big_r(&self, n: usize) -> Result<&BigReal> {
        fetch(&self.big_r, n, "R_n")
    }

    pub fn sigma(&self, n: usize) -> Result<&BigReal> {
        fetch(&self.sigma, n, "sigma_n")
    }

    /// (α, t) at this table's precision.
    pub fn alpha_t(&self) -> (BigReal, BigReal) {
        self.params.at(&self.context())
    }

    /// A context matching the table precision.
    pub fn context(&self) -> PrecisionContext {
        PrecisionContext::new(self.bits()).expect("table precision is valid")
    }
}

/// Root-free symmetric (LDLᵀ) factorization of the Hankel matrix
/// `(μ_{i+j})_{i,j=0}^{n_max}`; the pivots are h_0..h_{n_max}.
///
/// The checkerboard of exact zeros is kept; after the factorization every
/// wrong-parity multiplier must still be an exact zero.
pub fn factor_hankel(
    moments: &MomentTable,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<RecurrenceTable> {
    if moments.k_max < 2 * n_max {
        return Err(Error::domain(format!(
            "factor_hankel needs k_max >= 2 n_max ({} < {})",
            moments.k_max,
            2 * n_max
        )));
    }
    let size = n_max + 1;
    let mu: Vec<BigReal> = moments.mu.iter().map(|m| ctx.adopt(m)).collect();

    // l[i][k] for k < i; d[k] pivots
    let mut l: Vec<Vec<BigReal>> = Vec::with_capacity(size);
    let mut d: Vec<BigReal> = Vec::with_capacity(size);
    for i in 0..size {
        let mut row: Vec<BigReal> = Vec::with_capacity(i);
        for j in 0..i {
            let mut acc = mu[i + j].clone();
            for k in 0..j {
                if l[j][k].is_zero() || row[k].is_zero() {
                    continue;
                }
                // row[k] holds L_ik·d_k until finalized below
                acc -= &row[k] * &l[j][k];
            }
            row.push(acc);
        }
        // finalize: row[j] currently = L_ij·d_j
        let mut pivot = mu[2 * i].clone();
        for (k, entry) in row.iter_mut().enumerate() {
            let lik = &*entry / &d[k];
            pivot -= &lik * &*entry;
            *entry = lik;
        }
        if !pivot.is_positive() {
            return Err(Error::exhausted(
                ctx.bits(),
                format!("non-positive Hankel pivot at n = {i}"),
            ));
        }
        for (k, entry) in row.iter().enumerate() {
            if (i + k) % 2 == 1 && !entry.is_zero() {
                return Err(Error::Invariant(format!(
                    "parity sentinel: L[{i}][{k}] is not an exact zero"
                )));
            }
        }
        l.push(row);
        d.push(pivot);
    }

    let mut log_d = Vec::with_capacity(size + 1);
    let mut acc = ctx.zero();
    log_d.push(acc.clone());
    for hj in &d {
        acc += hj.ln();
        log_d.push(acc.clone());
    }

    let mut beta = Vec::with_capacity(size);
    beta.push(ctx.zero());
    for n in 1..size {
        beta.push(&d[n] / &d[n - 1]);
    }

    let mut p = Vec::with_capacity(size + 1);
    let mut running = ctx.zero();
    p.push(ctx.zero());
    p.push(ctx.zero());
    for b in beta.iter().skip(1) {
        running += b;
        p.push(-&running);
    }

    Ok(RecurrenceTable {
        params: moments.params.clone(),
        n_max,
        h: d,
        log_d,
        beta,
        p,
        r: Vec::new(),
        big_r: Vec::new(),
        sigma: Vec::new(),
    })
}

/// Fills `r_n = n − (2n+1+2α)β_n + 2p(n)` for `n ≤ n_max` and
/// `R_n = 2n+1+2t − (2n+3+2α)(β_n+β_{n+1}) + 4p(n)` for `n < n_max`.
pub fn ladder_quantities(table: &mut RecurrenceTable) -> Result<()> {
    let ctx = table.context();
    let (alpha, t) = table.params.at(&ctx);
    let two_alpha = alpha.mul_pow2(1);
    let n_max = table.n_max;

    let mut r = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let ni = n as i32;
        let coeff = &two_alpha + (2 * ni + 1);
        let v = ctx.int(n as i64) - coeff * &table.beta[n] + table.p[n].mul_pow2(1);
        r.push(if n == 0 { ctx.zero() } else { v });
    }

    let mut big_r = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let ni = n as i32;
        let coeff = &two_alpha + (2 * ni + 3);
        let v = t.mul_pow2(1) + (2 * ni + 1)
            - coeff * (&table.beta[n] + &table.beta[n + 1])
            + table.p[n].mul_pow2(2);
        big_r.push(v);
    }
    table.r = r;
    table.big_r = big_r;
    Ok(())
}

/// Fills `σ_n = −n(n+2t) − (2n−1+2α)p(n) − (2n+1+2α)p(n+1)` for `n ≤ n_max`.
pub fn sigma_values(table: &mut RecurrenceTable) -> Result<()> {
    let ctx = table.context();
    let (alpha, t) = table.params.at(&ctx);
    let two_alpha = alpha.mul_pow2(1);
    let mut sigma = Vec::with_capacity(table.n_max + 1);
    for n in 0..=table.n_max {
        let ni = n as i32;
        let nn = ctx.int(n as i64);
        let v = -(&nn * (&nn + t.mul_pow2(1)))
            - (&two_alpha + (2 * ni - 1)) * &table.p[n]
            - (&two_alpha + (2 * ni + 1)) * &table.p[n + 1];
        sigma.push(if n == 0 { ctx.zero() } else { v });
    }
    table.sigma = sigma;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(alpha: (i64, i64), t: (i64, i64), n_max: usize, bits: u32) -> RecurrenceTable {
        let c = PrecisionContext::new(bits).unwrap();
        let w = WeightParams::rational(alpha, t, &c).unwrap();
        RecurrenceTable::compute(&w, n_max, &c).unwrap()
    }

    #[test]
    fn initial_values() {
        let tb = table((1, 1), (1, 1), 6, 256);
        assert!(tb.beta[0].is_zero());
        assert!(tb.p[0].is_zero() && tb.p[1].is_zero());
        assert!(tb.r[0].is_zero());
        assert!(tb.sigma[0].is_zero());
        assert_eq!(tb.log_d[0], 0);
    }

    #[test]
    fn index_ranges() {
        let tb = table((1, 1), (1, 1), 6, 256);
        assert_eq!(tb.h.len(), 7);
        assert_eq!(tb.beta.len(), 7);
        assert_eq!(tb.p.len(), 8);
        assert_eq!(tb.log_d.len(), 8);
        assert_eq!(tb.r.len(), 7);
        assert_eq!(tb.big_r.len(), 6);
        assert_eq!(tb.sigma.len(), 7);
        assert!(matches!(tb.big_r(6), Err(Error::OutOfRange { .. })));
        assert!(tb.beta(6).is_ok());
    }

    #[test]
    fn first_recurrence_coefficient_is_moment_ratio() {
        let c = PrecisionContext::new(256).unwrap();
        let w = WeightParams::rational((2, 1), (1, 2), &c).unwrap();
        let m = build_moments(&w, 4, &c).unwrap();
        let tb = factor_hankel(&m, 2, &c).unwrap();
        let ratio = &m.mu[2] / &m.mu[0];
        assert!(((&tb.beta[1] - &ratio) / &ratio).abs() < c.pow2(-250));
    }

    #[test]
    fn positivity_chain() {
        let tb = table((1, 2), (5, 2), 20, 512);
        for n in 0..=20 {
            assert!(tb.h[n].is_positive());
            if n > 0 {
                assert!(tb.beta[n].is_positive());
                assert!(tb.sigma[n].is_negative());
                assert!(tb.sigma[n] < tb.sigma[n - 1]);
            }
        }
        for rn in &tb.big_r {
            assert!(rn.is_positive());
        }
    }

    #[test]
    fn telescoping_sum() {
        let tb = table((1, 1), (1, 1), 15, 512);
        let mut running = tb.context().zero();
        for n in 0..=15 {
            running += &tb.beta[n];
            assert!((&tb.p[n + 1] + &running).abs() <= tb.context().pow2(-500) * (running.abs() + 1));
            let gap = (&tb.p[n] - &tb.p[n + 1] - &tb.beta[n]).abs();
            assert!(gap <= tb.context().pow2(-500) * (tb.p[n].abs() + 1));
        }
    }

    #[test]
    fn too_few_moments_rejected() {
        let c = PrecisionContext::new(128).unwrap();
        let w = WeightParams::rational((1, 1), (1, 1), &c).unwrap();
        let m = build_moments(&w, 4, &c).unwrap();
        assert!(factor_hankel(&m, 3, &c).is_err());
    }

    #[test]
    fn sigma_is_minus_sum_of_big_r() {
        let tb = table((1, 1), (1, 1), 12, 512);
        let mut acc = tb.context().zero();
        for n in 0..12 {
            let gap = (&tb.sigma[n] + &acc).abs();
            assert!(gap <= tb.context().pow2(-480) * (acc.abs() + 1), "n={n}");
            acc += &tb.big_r[n];
        }
    }

    fn close(a: &BigReal, want: &str, digits: i32) {
        let c = PrecisionContext::new(a.bits()).unwrap();
        let w = c.parse(want).unwrap();
        let rel = ((a - &w) / &w).abs();
        assert!(rel < c.parse(&format!("1e-{digits}")).unwrap(), "{a} vs {want}");
    }

    // reference values computed independently with mpmath at 130 digits
    #[test]
    fn frozen_reference_values() {
        let tb = table((1, 1), (1, 1), 6, 512);
        close(&tb.beta[5], "0.196518236257716823518902440849232031496237688963405933564698", 55);
        close(&tb.sigma[4], "-12.679642826327688749003901777709801707512704157599", 45);
        close(&tb.big_r[3], "3.8314297039435622151226426527428199834541246331786", 45);
        close(&tb.big_r[0], "2.3756175252966607009589240854001820667895441260083", 45);
    }

    #[test]
    fn big_r_zero_closed_form() {
        let c = PrecisionContext::new(384).unwrap();
        let w = WeightParams::rational((3, 2), (7, 4), &c).unwrap();
        let tb = RecurrenceTable::compute(&w, 3, &c).unwrap();
        let closed = super::super::big_r_zero_closed_form(&w, &c).unwrap();
        let rel = ((&tb.big_r[0] - &closed) / &closed).abs();
        assert!(rel < c.pow2(-180), "{rel:?}");
    }

    #[test]
    fn hankel_determinant_ratio_oracle() {
        // β_n = D_{n+1} D_{n−1} / D_n², with determinants by fraction-free
        // elimination at twice the precision
        let c2 = PrecisionContext::new(1024).unwrap();
        let w = WeightParams::rational((1, 1), (1, 1), &c2).unwrap();
        let m = build_moments(&w, 14, &c2).unwrap();
        let det = |k: usize| -> BigReal {
            if k == 0 {
                return c2.one();
            }
            let mut a: Vec<Vec<BigReal>> = (0..k)
                .map(|i| (0..k).map(|j| m.mu[i + j].clone()).collect())
                .collect();
            let mut prev = c2.one();
            for p in 0..k - 1 {
                for i in p + 1..k {
                    for j in p + 1..k {
                        a[i][j] = (&a[i][j] * &a[p][p] - &a[i][p] * &a[p][j]) / &prev;
                    }
                }
                prev = a[p][p].clone();
            }
            a[k - 1][k - 1].clone()
        };
        let tb = table((1, 1), (1, 1), 7, 512);
        for n in 1..=6 {
            let oracle = det(n + 1) * det(n - 1) / det(n).square();
            let got = c2.adopt(&tb.beta[n]);
            assert!(((&got - &oracle) / &oracle).abs() < c2.pow2(-440), "n={n}");
        }
    }

    #[test]
    fn sigma_is_log_derivative_of_hankel_determinant() {
        // σ_n = 2t d/dt ln D_n, at t = 1
        use crate::precision::{central_derivative, DerivativeOrder};
        let c = PrecisionContext::new(512).unwrap();
        let w = WeightParams::rational((1, 1), (1, 1), &c).unwrap();
        let tb = RecurrenceTable::compute(&w, 5, &c).unwrap();
        let d = central_derivative(
            |t| {
                let wt = w.with_t(t.clone())?;
                let tbl = RecurrenceTable::compute(&wt, 5, &c)?;
                Ok(tbl.log_d[4].clone())
            },
            &c.one(),
            DerivativeOrder::First,
            &c,
        )
        .unwrap();
        let sigma = d.mul_pow2(1);
        let rel = ((&sigma - &tb.sigma[4]) / &tb.sigma[4]).abs();
        assert!(rel < c.pow2(-200), "{rel:?}");
    }
}
