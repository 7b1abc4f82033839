use std::fmt;

use crate::error::{Error, Result};
use crate::orthopoly::WeightParams;
use crate::precision::{BigReal, PrecisionContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    /// β_n.
    Beta,
    /// p(n,t).
    P,
    /// σ_n(t).
    Sigma,
    /// ln D_n(t), with the unknown constants c̃₁ and c̃₀.
    LogD,
    /// Lagrange multiplier A of the continuum picture.
    ASeries,
    /// Continuum free energy F[σ], with the unknown constant C₀.
    FSeries,
}

impl SeriesKind {
    pub fn label(self) -> &'static str {
        match self {
            SeriesKind::Beta => "beta",
            SeriesKind::P => "p",
            SeriesKind::Sigma => "sigma",
            SeriesKind::LogD => "logd",
            SeriesKind::ASeries => "a",
            SeriesKind::FSeries => "f",
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Names of the constants that have no closed form.
pub const C1_TILDE: &str = "c1_tilde";
pub const C0_TILDE: &str = "c0_tilde";
pub const C0_FREE: &str = "C0";

#[derive(Clone, Debug)]
pub enum Coefficient {
    Known(BigReal),
    /// `sign · constant` where the constant must be supplied by a fit.
    Unknown { name: &'static str, sign: i32 },
}

/// `coefficient · n^{thirds/3}`, or `coefficient · ln n` when `log` is set.
#[derive(Clone, Debug)]
pub struct SeriesTerm {
    pub thirds: i32,
    pub log: bool,
    pub coefficient: Coefficient,
}

#[derive(Clone, Debug)]
pub struct ExpansionSeries {
    pub kind: SeriesKind,
    pub params: WeightParams,
    /// Ordered by decreasing power.
    pub terms: Vec<SeriesTerm>,
    constants: Vec<(&'static str, BigReal)>,
    ctx: PrecisionContext,
}

struct Powers {
    t13: BigReal,
    t23: BigReal,
    c: BigReal,
    c2: BigReal,
    alpha: BigReal,
    t: BigReal,
    ctx: PrecisionContext,
}

impl Powers {
    fn new(params: &WeightParams, ctx: &PrecisionContext) -> Self {
        let (alpha, t) = params.at(ctx);
        let t13 = t.cbrt();
        let c = ctx.int(2).cbrt();
        Powers {
            t23: t13.square(),
            t13,
            c2: c.square(),
            c,
            alpha,
            t,
            ctx: *ctx,
        }
    }
}

fn known(thirds: i32, v: BigReal) -> SeriesTerm {
    SeriesTerm {
        thirds,
        log: false,
        coefficient: Coefficient::Known(v),
    }
}

fn log_term(v: BigReal) -> SeriesTerm {
    SeriesTerm {
        thirds: 0,
        log: true,
        coefficient: Coefficient::Known(v),
    }
}

fn unknown(thirds: i32, name: &'static str, sign: i32) -> SeriesTerm {
    SeriesTerm {
        thirds,
        log: false,
        coefficient: Coefficient::Unknown { name, sign },
    }
}

fn beta_terms(p: &Powers) -> Vec<SeriesTerm> {
    let (a, t, ctx) = (&p.alpha, &p.t, &p.ctx);
    let tm2a = t - a.mul_pow2(1);
    let a6 = (5 - tm2a.square() * 3) / 144;
    let a8 = (t.square() * t * 2 - t.square() * a * 12 - t * (a.square() * 12 + 17)
        - a * 16 * (a.square() - 1))
        * 5
        / (&p.c2 * &p.t13 * 1296);
    vec![
        known(0, ctx.ratio(1, 4)),
        known(-1, ctx.zero()),
        known(-2, -(&p.t23 / (&p.c2 * 4))),
        known(-3, ctx.zero()),
        known(-4, &p.t13 * &tm2a / (&p.c * 12)),
        known(-5, &p.t23 * a / (&p.c2 * 6)),
        known(-6, a6),
        known(-7, -(a * &p.t13 * &tm2a / (&p.c * 9))),
        known(-8, a8),
    ]
}

fn p_terms(p: &Powers) -> Vec<SeriesTerm> {
    let (a, t, ctx) = (&p.alpha, &p.t, &p.ctx);
    let tm2a = t - a.mul_pow2(1);
    let two_a_m1 = a.mul_pow2(1) - 1;
    vec![
        known(3, ctx.ratio(-1, 4)),
        known(2, ctx.zero()),
        known(1, &p.t23 * 3 / (&p.c2 * 4)),
        known(0, (a.mul_pow2(1) + 1 - t.mul_pow2(2)) / 8),
        known(-1, &p.t13 * &tm2a / (&p.c * 4)),
        known(-2, &two_a_m1 * &p.t23 / (&p.c2 * 8)),
        known(-3, (5 - tm2a.square() * 3) / 144),
        known(-4, -(&two_a_m1 * &p.t13 * &tm2a / (&p.c * 24))),
    ]
}

fn sigma_terms(p: &Powers) -> Vec<SeriesTerm> {
    let (a, t) = (&p.alpha, &p.t);
    let tm2a = t - a.mul_pow2(1);
    let last = t.square() * t - t.square() * a * 6 + t * a.square() * 48 + t.mul_pow2(1)
        - a.square() * a * 8
        + a * 8;
    vec![
        known(4, -(&p.t23 * 3 / &p.c2)),
        known(2, -(&p.t13 * &tm2a / &p.c)),
        known(1, -(p.c2.square() * &p.t23 * a)),
        known(0, (t.square() * 3 + t * a * 60 - a.square() * 24 + 4) / 36),
        known(-1, -(&p.c2 * a * &p.t13 * &tm2a / 3)),
        known(-2, -(last / (&p.t13 * &p.c2 * 54))),
    ]
}

fn logd_terms(p: &Powers) -> Vec<SeriesTerm> {
    let (a, t, ctx) = (&p.alpha, &p.t, &p.ctx);
    let tm8a = t - a * 8;
    let last = t.square() * t * 5 - t.square() * a * 48 + t * (a.square() * 24 + 1) * 40
        + a * (a.square() - 1) * 320;
    vec![
        known(6, -ctx.ln2()),
        known(4, -(&p.t23 * 9 / (&p.c2 * 4))),
        unknown(3, C1_TILDE, -1),
        known(2, -(&p.t13 * &tm8a * 3 / (&p.c * 8))),
        known(1, -(&p.t23 * a * 3 / &p.c2)),
        log_term((a.square() * 12 - 5) / 36),
        known(
            0,
            (t.square() * 3 + t * a * 120 - (a.square() * 6 - 1) * 8 * t.ln()) / 144,
        ),
        unknown(0, C0_TILDE, -1),
        known(-1, -(a * &p.t13 * &tm8a / (&p.c * 4))),
        known(-2, -(last / (&p.t13 * &p.c2 * 1440))),
    ]
}

fn a_terms(p: &Powers) -> Vec<SeriesTerm> {
    let (a, t, ctx) = (&p.alpha, &p.t, &p.ctx);
    let ln4 = ctx.ln2().mul_pow2(1);
    let tm8a = t - a * 8;
    let quint = t.square() * t * 5 - t.square() * a * 48 + a.square() * t * 960
        + a.square() * a * 320;
    vec![
        known(3, ln4.clone()),
        known(1, &p.t23 * 3 / &p.c2),
        known(0, a * &ln4),
        known(-1, &p.t13 * &tm8a / (&p.c * 4)),
        known(-2, &p.t23 * a / &p.c2),
        known(-3, -(a.square() / 3)),
        known(-4, -(a * &p.t13 * &tm8a / (&p.c * 12))),
        known(-5, -(quint / (&p.c2 * &p.t13 * 2160))),
        known(-6, a.square() * a / 3),
    ]
}

fn f_terms(p: &Powers) -> Vec<SeriesTerm> {
    let (a, t, ctx) = (&p.alpha, &p.t, &p.ctx);
    let tm8a = t - a * 8;
    let quint = t.square() * t * 5 - t.square() * a * 48 + a.square() * t * 960
        + a.square() * a * 320;
    vec![
        known(6, ctx.ln2()),
        known(4, &p.t23 * 9 / (&p.c2 * 4)),
        known(3, a * ctx.ln2().mul_pow2(1)),
        known(2, &p.t13 * &tm8a * 3 / (&p.c * 8)),
        known(1, &p.t23 * a * 3 / &p.c2),
        log_term(-(a.square() / 3)),
        unknown(0, C0_FREE, 1),
        known(-1, a * &p.t13 * &tm8a / (&p.c * 4)),
        known(-2, quint / (&p.t13 * &p.c2 * 1440)),
    ]
}

impl ExpansionSeries {
    pub fn new(kind: SeriesKind, params: &WeightParams, ctx: &PrecisionContext) -> Self {
        let p = Powers::new(params, ctx);
        let terms = match kind {
            SeriesKind::Beta => beta_terms(&p),
            SeriesKind::P => p_terms(&p),
            SeriesKind::Sigma => sigma_terms(&p),
            SeriesKind::LogD => logd_terms(&p),
            SeriesKind::ASeries => a_terms(&p),
            SeriesKind::FSeries => f_terms(&p),
        };
        ExpansionSeries {
            kind,
            params: params.clone(),
            terms,
            constants: Vec::new(),
            ctx: *ctx,
        }
    }

    /// Supplies a fitted value for an unknown constant.
    pub fn with_constant(mut self, name: &'static str, value: BigReal) -> Self {
        self.constants.retain(|(k, _)| *k != name);
        self.constants.push((name, value));
        self
    }

    /// Known coefficient multiplying `n^{thirds/3}` (non-log), if present.
    pub fn coefficient(&self, thirds: i32) -> Option<&BigReal> {
        self.terms.iter().find_map(|term| match (&term.coefficient, term.log) {
            (Coefficient::Known(v), false) if term.thirds == thirds => Some(v),
            _ => None,
        })
    }

    /// Smallest exponent (in thirds) the series carries.
    pub fn lowest_thirds(&self) -> i32 {
        self.terms.iter().map(|t| t.thirds).min().unwrap_or(0)
    }

    pub fn context(&self) -> PrecisionContext {
        self.ctx
    }
}

/// Partial sum over all terms with exponent `≥ −order/3` (log terms count
/// as exponent 0).
pub fn expansion_eval(series: &ExpansionSeries, n: &BigReal, order: i32) -> Result<BigReal> {
    let ctx = series.context();
    let n = ctx.adopt(n);
    if !n.is_positive() {
        return Err(Error::domain("expansions are evaluated at n > 0"));
    }
    if -order < series.lowest_thirds() {
        return Err(Error::domain(format!(
            "{} series is only available through exponent {}/3",
            series.kind,
            series.lowest_thirds()
        )));
    }
    let n13 = n.cbrt();
    let ln_n = n.ln();
    let mut acc = ctx.zero();
    for term in &series.terms {
        if term.thirds < -order {
            continue;
        }
        let coeff = match &term.coefficient {
            Coefficient::Known(v) => v.clone(),
            Coefficient::Unknown { name, sign } => {
                let v = series
                    .constants
                    .iter()
                    .find(|(k, _)| k == name)
                    .map(|(_, v)| ctx.adopt(v))
                    .ok_or(Error::UnfittedConstant(name))?;
                v * *sign
            }
        };
        let basis = if term.log {
            ln_n.clone()
        } else {
            n13.powi(term.thirds)
        };
        acc += coeff * basis;
    }
    Ok(acc)
}
