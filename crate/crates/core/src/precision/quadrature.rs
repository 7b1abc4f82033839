//! Double-exponential quadrature at arbitrary precision.
//!
//! Finite intervals use the tanh-sinh map `x = tanh(π/2 · sinh τ)`. A
//! half-line `[lo, ∞)` (or `(-∞, hi]`) uses the exp-exp map
//! `s = exp(τ − e^{−τ})`, suited to integrands that decay exponentially.
//!
//! Each refinement level halves the step in `τ`, reusing all earlier nodes.
//! The integrand receives an [`Abscissa`] carrying the distances to the
//! finite endpoints computed without cancellation, so integrable endpoint
//! singularities (`ln(x − lo)`, `(hi − x)^(−1/2)`, ...) can be evaluated
//! accurately even when `x` rounds onto the endpoint.

use super::{BigReal, PrecisionContext};
use crate::error::{Error, Result};

/// An integration limit.
#[derive(Clone, Debug)]
pub enum Bound {
    Finite(BigReal),
    NegInfinity,
    PosInfinity,
}

impl From<BigReal> for Bound {
    fn from(v: BigReal) -> Self {
        Bound::Finite(v)
    }
}

impl From<&BigReal> for Bound {
    fn from(v: &BigReal) -> Self {
        Bound::Finite(v.clone())
    }
}

/// A quadrature node as seen by the integrand.
#[derive(Clone, Debug)]
pub struct Abscissa {
    pub x: BigReal,
    /// `x − lo`, when `lo` is finite.
    pub from_lo: Option<BigReal>,
    /// `hi − x`, when `hi` is finite.
    pub from_hi: Option<BigReal>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QuadratureStats {
    pub level: u32,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Map {
    TanhSinh,
    ExpExp,
}

struct Domain {
    map: Map,
    lo: Option<BigReal>,
    hi: Option<BigReal>,
    half_width: Option<BigReal>,
    tau_neg_cap: f64,
    tau_pos_cap: f64,
}

impl Domain {
    fn new(lo: &Bound, hi: &Bound, ctx: &PrecisionContext) -> Result<Domain> {
        let bits = ctx.bits() as f64;
        let ln2 = std::f64::consts::LN_2;
        match (lo, hi) {
            (Bound::Finite(a), Bound::Finite(b)) => {
                // also rejects NaN limits
                if a.partial_cmp(b) != Some(std::cmp::Ordering::Less) {
                    return Err(Error::domain("integration limits must satisfy lo < hi"));
                }
                // beyond this the endpoint distance is below 2^(-2 bits)
                let cap = (2.0 * (bits + 32.0) * ln2 / std::f64::consts::PI).asinh() + 0.5;
                Ok(Domain {
                    map: Map::TanhSinh,
                    lo: Some(a.clone()),
                    hi: Some(b.clone()),
                    half_width: Some((b - a).mul_pow2(-1)),
                    tau_neg_cap: cap,
                    tau_pos_cap: cap,
                })
            }
            (Bound::Finite(a), Bound::PosInfinity) => Ok(Domain {
                map: Map::ExpExp,
                lo: Some(a.clone()),
                hi: None,
                half_width: None,
                tau_neg_cap: (4.0 * (bits + 32.0) * ln2).ln() + 1.0,
                tau_pos_cap: (64.0 * (bits + 32.0)).ln() + 4.0,
            }),
            (Bound::NegInfinity, Bound::Finite(b)) => Ok(Domain {
                map: Map::ExpExp,
                lo: None,
                hi: Some(b.clone()),
                half_width: None,
                tau_neg_cap: (4.0 * (bits + 32.0) * ln2).ln() + 1.0,
                tau_pos_cap: (64.0 * (bits + 32.0)).ln() + 4.0,
            }),
            _ => Err(Error::domain(
                "unsupported integration limits (need a finite interval or a half-line)",
            )),
        }
    }

    /// Node and weight (including `dx/dτ`) at `τ`.
    fn node(&self, tau: &BigReal, ctx: &PrecisionContext) -> (Abscissa, BigReal) {
        match self.map {
            Map::TanhSinh => {
                let half_pi = ctx.pi().mul_pow2(-1);
                let u = &half_pi * tau.sinh();
                let e2u = u.mul_pow2(1).exp();
                let denom = &e2u + 1;
                // 1 + tanh u and 1 − tanh u without cancellation
                let one_plus = e2u.mul_pow2(1) / &denom;
                let one_minus = ctx.int(2) / &denom;
                let half = self.half_width.as_ref().expect("finite interval");
                let from_lo = half * &one_plus;
                let from_hi = half * &one_minus;
                let x = if tau.is_negative() {
                    self.lo.as_ref().unwrap() + &from_lo
                } else {
                    self.hi.as_ref().unwrap() - &from_hi
                };
                let w = half_pi * tau.cosh() * e2u.mul_pow2(2) / denom.square() * half;
                (
                    Abscissa {
                        x,
                        from_lo: Some(from_lo),
                        from_hi: Some(from_hi),
                    },
                    w,
                )
            }
            Map::ExpExp => {
                let emt = (-tau).exp();
                let s = (tau - &emt).exp();
                let w = &s * (emt + 1);
                let abscissa = match (&self.lo, &self.hi) {
                    (Some(a), None) => Abscissa {
                        x: a + &s,
                        from_lo: Some(s),
                        from_hi: None,
                    },
                    (None, Some(b)) => Abscissa {
                        x: b - &s,
                        from_lo: None,
                        from_hi: Some(s),
                    },
                    _ => unreachable!("half-line domain"),
                };
                (abscissa, w)
            }
        }
    }
}

/// Integrates the vector-valued `f` (writing `dim` components into its output
/// slice) over `[lo, hi]`, sharing nodes between components.
///
/// Refinement stops once every component changes by at most
/// `2^(-bits/2 - 8)` relative to its absolute integral between consecutive
/// levels; double-exponential convergence then leaves the finer estimate
/// accurate to roughly the working precision.
pub fn integrate_many<F>(
    mut f: F,
    dim: usize,
    lo: impl Into<Bound>,
    hi: impl Into<Bound>,
    ctx: &PrecisionContext,
) -> Result<(Vec<BigReal>, QuadratureStats)>
where
    F: FnMut(&Abscissa, &mut [BigReal]),
{
    let (lo, hi) = (lo.into(), hi.into());
    let domain = Domain::new(&lo, &hi, ctx)?;
    let bits = ctx.bits() as i32;
    let negligible = ctx.pow2(-(bits + 24));
    let tol = ctx.pow2(-(bits / 2 + 8));

    let mut out = vec![ctx.zero(); dim];
    let mut sum = vec![ctx.zero(); dim];
    let mut abs_sum = vec![ctx.zero(); dim];
    let mut prev: Option<(Vec<BigReal>, Vec<BigReal>)> = None;
    let mut evaluations = 0usize;
    let min_level = 3;

    for level in 0..=ctx.quad_level() {
        let h = ctx.pow2(-(level as i32));
        let mut level_sum = vec![ctx.zero(); dim];
        let mut level_abs = vec![ctx.zero(); dim];
        let mut peak = vec![ctx.zero(); dim];

        // level 0 visits every integer τ; level L > 0 the odd multiples of 2^-L
        let (first, stride) = if level == 0 { (0i64, 1i64) } else { (1, 2) };
        for direction in [1i64, -1] {
            let cap = if direction > 0 {
                domain.tau_pos_cap
            } else {
                domain.tau_neg_cap
            };
            let mut quiet = 0;
            let mut k = if level == 0 && direction < 0 { 1 } else { first };
            loop {
                let tau_f = (k as f64) * 0.5f64.powi(level as i32);
                if tau_f > cap {
                    break;
                }
                // caps stay below 20 and levels below 25, so k fits in i32
                let tau = &h * (direction * k) as i32;
                let (abscissa, weight) = domain.node(&tau, ctx);
                f(&abscissa, &mut out);
                evaluations += 1;
                let mut all_small = true;
                for i in 0..dim {
                    let term = &out[i] * &weight;
                    if !term.is_finite() {
                        if weight < negligible {
                            continue;
                        }
                        return Err(Error::domain(format!(
                            "integrand is not finite at x = {}",
                            abscissa.x.to_decimal(20)
                        )));
                    }
                    let mag = term.abs();
                    if mag > peak[i] {
                        peak[i] = mag.clone();
                    }
                    if mag > &negligible * &peak[i] {
                        all_small = false;
                    }
                    level_abs[i] += &mag;
                    level_sum[i] += &term;
                }
                if all_small {
                    quiet += 1;
                    if quiet >= 2 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                k += stride;
            }
        }

        for i in 0..dim {
            let new_sum = match &prev {
                None => &level_sum[i] * &h,
                Some((s, _)) => s[i].mul_pow2(-1) + &level_sum[i] * &h,
            };
            let new_abs = match &prev {
                None => &level_abs[i] * &h,
                Some((_, a)) => a[i].mul_pow2(-1) + &level_abs[i] * &h,
            };
            sum[i] = new_sum;
            abs_sum[i] = new_abs;
        }

        if level >= min_level {
            let (old, _) = prev.as_ref().expect("previous level present");
            let converged = (0..dim).all(|i| {
                let change = (&sum[i] - &old[i]).abs();
                change <= &tol * &abs_sum[i]
            });
            if converged {
                return Ok((
                    sum,
                    QuadratureStats {
                        level,
                        evaluations,
                    },
                ));
            }
        }
        prev = Some((sum.clone(), abs_sum.clone()));
    }
    Err(Error::exhausted(
        ctx.bits(),
        format!(
            "double-exponential quadrature did not converge by level {}",
            ctx.quad_level()
        ),
    ))
}

/// Scalar integral of `f` over `[lo, hi]` with access to endpoint distances.
pub fn integrate<F>(
    mut f: F,
    lo: impl Into<Bound>,
    hi: impl Into<Bound>,
    ctx: &PrecisionContext,
) -> Result<BigReal>
where
    F: FnMut(&Abscissa) -> BigReal,
{
    let (mut v, _) = integrate_many(|p, out| out[0] = f(p), 1, lo, hi, ctx)?;
    Ok(v.pop().expect("one component"))
}

/// Scalar integral of `f(x)` over `[lo, hi]`; `hi` may be `+∞` (or `lo` be
/// `−∞`) for exponentially decaying integrands.
pub fn tanh_sinh_integrate<F>(
    f: F,
    lo: impl Into<Bound>,
    hi: impl Into<Bound>,
    ctx: &PrecisionContext,
) -> Result<BigReal>
where
    F: Fn(&BigReal) -> BigReal,
{
    integrate(|p| f(&p.x), lo, hi, ctx)
}
