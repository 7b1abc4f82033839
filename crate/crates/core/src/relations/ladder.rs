use super::{RelationId, ResidualReport, Terms};
use crate::error::{Error, Result};
use crate::orthopoly::{polynomial_coeffs, RecurrenceTable, WeightParams};
use crate::precision::{BigReal, PrecisionContext};

/// The rational ladder coefficients at one degree:
/// `A_n(z) = (2n+1+2α)/(1−z²) + R_n/(1−z²)²`,
/// `B_n(z) = nz/(1−z²) + z r_n/(1−z²)²`,
/// and `Σ_{j<n} A_j(z)` in closed form through β_n and p(n,t).
#[derive(Clone, Debug)]
pub struct LadderRational {
    pub n: usize,
    pub params: WeightParams,
    alpha: BigReal,
    t: BigReal,
    a1: BigReal,
    a2: BigReal,
    r: BigReal,
    sum1: BigReal,
    sum2: BigReal,
}

impl LadderRational {
    /// Requires `n < n_max` (R_n needs β_{n+1}).
    pub fn from_table(table: &RecurrenceTable, n: usize) -> Result<Self> {
        let ctx = table.context();
        let (alpha, t) = table.alpha_t();
        let two_alpha = alpha.mul_pow2(1);
        let ni = n as i32;
        let nn = ctx.int(n as i64);
        let big_r = table.big_r(n)?.clone();
        let beta = table.beta(n)?;
        let p = table.p(n)?;
        let sum1 = &nn * (&nn + &two_alpha);
        let sum2 = &nn * (&nn + t.mul_pow2(1)) - (&two_alpha + (2 * ni + 1)) * beta
            + (&nn + &alpha).mul_pow2(2) * p;
        Ok(LadderRational {
            n,
            params: table.params.clone(),
            a1: &two_alpha + (2 * ni + 1),
            a2: big_r,
            r: table.r(n)?.clone(),
            sum1,
            sum2,
            alpha,
            t,
        })
    }

    fn gap(&self, z: &BigReal) -> Result<BigReal> {
        let d = 1 - z.square();
        if !d.is_positive() {
            return Err(Error::domain(format!(
                "ladder coefficients need |z| < 1, got {}",
                z.to_decimal(20)
            )));
        }
        Ok(d)
    }

    pub fn a(&self, z: &BigReal) -> Result<BigReal> {
        let d = self.gap(z)?;
        Ok(&self.a1 / &d + &self.a2 / d.square())
    }

    pub fn a_prime(&self, z: &BigReal) -> Result<BigReal> {
        let d = self.gap(z)?;
        let d2 = d.square();
        Ok((&self.a1 * z).mul_pow2(1) / &d2 + (&self.a2 * z).mul_pow2(2) / (d2 * d))
    }

    pub fn b(&self, z: &BigReal) -> Result<BigReal> {
        let d = self.gap(z)?;
        Ok(z * self.n as i32 / &d + z * &self.r / d.square())
    }

    pub fn b_prime(&self, z: &BigReal) -> Result<BigReal> {
        let d = self.gap(z)?;
        let d2 = d.square();
        let z2 = z.square();
        Ok((&z2 + 1) * self.n as i32 / &d2 + (z2 * 3 + 1) * &self.r / (d2 * d))
    }

    pub fn v_prime(&self, z: &BigReal) -> Result<BigReal> {
        let d = self.gap(z)?;
        Ok((&self.alpha * z).mul_pow2(1) / &d + (&self.t * z).mul_pow2(1) / d.square())
    }

    pub fn sum_a_below(&self, z: &BigReal) -> Result<BigReal> {
        let d = self.gap(z)?;
        Ok(&self.sum1 / &d + &self.sum2 / d.square())
    }
}

fn check_z(z: &BigReal) -> Result<()> {
    if z.abs() >= 1 {
        return Err(Error::domain(format!(
            "sample point must satisfy |z| < 1, got {}",
            z.to_decimal(20)
        )));
    }
    Ok(())
}

/// Residuals of the second-order ODE for P_n at each sample, scaled by the
/// largest term. `n ≥ 1`.
pub fn check_polynomial_ode(
    table: &RecurrenceTable,
    n: usize,
    z_samples: &[BigReal],
) -> Result<Vec<ResidualReport>> {
    if n == 0 {
        return Err(Error::domain("the polynomial ODE check needs n >= 1"));
    }
    let ctx = table.context();
    let ladder = LadderRational::from_table(table, n)?;
    let polys = polynomial_coeffs(table, n)?;
    let pn = &polys[n];
    let mut out = Vec::with_capacity(z_samples.len());
    for z in z_samples {
        check_z(z)?;
        let z = ctx.adopt(z);
        let (p, dp, ddp) = pn.eval_with_derivatives(&z);
        let a = ladder.a(&z)?;
        let ratio = ladder.a_prime(&z)? / &a;
        let b = ladder.b(&z)?;
        let mut terms = Terms::new(&ctx);
        terms.push(ddp);
        terms.push(-(ladder.v_prime(&z)? * &dp));
        terms.push(-(&ratio * &dp));
        terms.push(ladder.b_prime(&z)? * &p);
        terms.push(-(b * &ratio * &p));
        terms.push(ladder.sum_a_below(&z)? * &p);
        out.push(
            terms
                .report_max_scaled(RelationId::PolyOde, n, &table.params)
                .at_z(&z),
        );
    }
    Ok(out)
}

/// Residual of `P_n′ + B_n P_n − β_n A_n P_{n−1}` at `z`.
pub fn check_lowering(table: &RecurrenceTable, n: usize, z: &BigReal) -> Result<ResidualReport> {
    if n == 0 {
        return Err(Error::domain("the lowering relation needs n >= 1"));
    }
    check_z(z)?;
    let ctx: PrecisionContext = table.context();
    let z = ctx.adopt(z);
    let ladder = LadderRational::from_table(table, n)?;
    let polys = polynomial_coeffs(table, n)?;
    let (p, dp, _) = polys[n].eval_with_derivatives(&z);
    let q = polys[n - 1].eval(&z);
    let mut terms = Terms::new(&ctx);
    terms.push(dp);
    terms.push(ladder.b(&z)? * &p);
    terms.push(-(&table.beta[n] * ladder.a(&z)? * q));
    Ok(terms.report(RelationId::Lowering, n, &table.params).at_z(&z))
}
