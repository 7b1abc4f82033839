//! Residuals of the fixed-t relations among the table quantities.
//!
//! Every check returns a [`ResidualReport`] whose `relative` field is the raw
//! residual divided by the sum of magnitudes of the equation's top-level
//! terms (the polynomial ODE uses the largest term instead).

mod algebraic;
mod ladder;

pub use algebraic::{
    check_compatibility, residual_beta_difference, residual_p_difference,
    residual_sigma_difference,
};
pub use ladder::{check_lowering, check_polynomial_ode, LadderRational};

use std::fmt;

use crate::orthopoly::WeightParams;
use crate::precision::{BigReal, PrecisionContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationId {
    S1,
    S21,
    S22,
    S2P1,
    S2P2,
    S2P3,
    Btd,
    Pnd,
    Snd,
    PolyOde,
    Lowering,
    Eq1,
    Pnt,
    Eq2,
    Ric1,
    Ric2,
    RnOde,
    SmallRnOde,
    PainleveV,
    SigmaOde,
    SigmaDef,
    Equilibrium,
    SingularEquilibrium,
}

impl RelationId {
    pub fn label(self) -> &'static str {
        match self {
            RelationId::S1 => "S1",
            RelationId::S21 => "S21",
            RelationId::S22 => "S22",
            RelationId::S2P1 => "S2P1",
            RelationId::S2P2 => "S2P2",
            RelationId::S2P3 => "S2P3",
            RelationId::Btd => "BTD",
            RelationId::Pnd => "PND",
            RelationId::Snd => "SND",
            RelationId::PolyOde => "POLY_ODE",
            RelationId::Lowering => "LOWERING",
            RelationId::Eq1 => "EQ1",
            RelationId::Pnt => "PNT",
            RelationId::Eq2 => "EQ2",
            RelationId::Ric1 => "RIC1",
            RelationId::Ric2 => "RIC2",
            RelationId::RnOde => "RN_ODE",
            RelationId::SmallRnOde => "SMALL_RN_ODE",
            RelationId::PainleveV => "PV",
            RelationId::SigmaOde => "SIGMA_ODE",
            RelationId::SigmaDef => "SIGMA_DEF",
            RelationId::Equilibrium => "EQUILIBRIUM",
            RelationId::SingularEquilibrium => "SIE",
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `2^{−bits/4}`.
pub fn default_tolerance(ctx: &PrecisionContext) -> BigReal {
    ctx.pow2(-(ctx.bits() as i32) / 4)
}

#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub relation_id: RelationId,
    pub n: usize,
    /// Sample point for z-dependent relations.
    pub z: Option<BigReal>,
    pub params: WeightParams,
    pub bits: u32,
    pub residual: BigReal,
    pub scale: BigReal,
    pub relative: BigReal,
    pub pass: bool,
}

impl ResidualReport {
    /// Builds a report judged against the default tolerance. A zero scale
    /// (every term exactly zero) is replaced by 1.
    pub fn new(
        relation_id: RelationId,
        n: usize,
        params: &WeightParams,
        residual: BigReal,
        scale: BigReal,
    ) -> Self {
        let ctx = PrecisionContext::new(residual.bits()).expect("valid precision");
        let scale = if scale.is_zero() { ctx.one() } else { scale };
        let relative = residual.abs() / &scale;
        let pass = relative <= default_tolerance(&ctx);
        ResidualReport {
            relation_id,
            n,
            z: None,
            params: params.clone(),
            bits: ctx.bits(),
            residual,
            scale,
            relative,
            pass,
        }
    }

    pub fn at_z(mut self, z: &BigReal) -> Self {
        self.z = Some(z.clone());
        self
    }

    /// Re-judges against a caller-supplied tolerance.
    pub fn with_tolerance(mut self, tolerance: &BigReal) -> Self {
        self.pass = self.relative <= tolerance.convert(self.bits);
        self
    }

    /// `relative` as a decimal log, for compact summaries.
    pub fn log10_relative(&self) -> f64 {
        if self.relative.is_zero() {
            f64::NEG_INFINITY
        } else {
            let ctx = PrecisionContext::new(self.bits).expect("valid precision");
            (self.relative.ln() / ctx.int(10).ln()).to_f64()
        }
    }
}

/// Accumulates the top-level terms of an equation written as `Σ terms = 0`.
pub(crate) struct Terms {
    sum: BigReal,
    abs_sum: BigReal,
    abs_max: BigReal,
}

impl Terms {
    pub(crate) fn new(ctx: &PrecisionContext) -> Self {
        Terms {
            sum: ctx.zero(),
            abs_sum: ctx.zero(),
            abs_max: ctx.zero(),
        }
    }

    pub(crate) fn push(&mut self, term: BigReal) -> &mut Self {
        let a = term.abs();
        self.abs_sum += &a;
        if a > self.abs_max {
            self.abs_max = a;
        }
        self.sum += term;
        self
    }

    /// `(Σ terms, Σ |terms|)`.
    pub(crate) fn into_parts(self) -> (BigReal, BigReal) {
        (self.sum, self.abs_sum)
    }

    pub(crate) fn report(self, id: RelationId, n: usize, params: &WeightParams) -> ResidualReport {
        ResidualReport::new(id, n, params, self.sum, self.abs_sum)
    }

    pub(crate) fn report_max_scaled(
        self,
        id: RelationId,
        n: usize,
        params: &WeightParams,
    ) -> ResidualReport {
        ResidualReport::new(id, n, params, self.sum, self.abs_max)
    }
}

/// Sorts reports by relation, degree and sample point.
pub fn sort_reports(reports: &mut [ResidualReport]) {
    reports.sort_by(|a, b| {
        a.relation_id
            .cmp(&b.relation_id)
            .then(a.n.cmp(&b.n))
            .then_with(|| match (&a.z, &b.z) {
                (Some(x), Some(y)) => x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal),
                (None, Some(_)) => std::cmp::Ordering::Less,
                (Some(_), None) => std::cmp::Ordering::Greater,
                (None, None) => std::cmp::Ordering::Equal,
            })
    });
}
