use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::orthopoly::{RecurrenceTable, WeightParams};
use crate::precision::{
    stencil_combination, with_escalation, BigReal, DerivativeOrder, PrecisionContext,
};

/// Five recurrence tables on the t-stencil `t−2h, t−h, t, t+h, t+2h`
/// sharing α, precision and `n_max`.
#[derive(Clone, Debug)]
pub struct StencilBundle {
    pub params: WeightParams,
    pub n_max: usize,
    pub t_center: BigReal,
    pub h: BigReal,
    pub tables: Vec<RecurrenceTable>,
}

/// Value and first two t-derivatives of a table quantity at the centre.
#[derive(Clone, Debug)]
pub struct Jet {
    pub value: BigReal,
    pub d1: BigReal,
    pub d2: BigReal,
}

impl StencilBundle {
    /// Builds with the context's default step `2^{−fd_step_exponent}`.
    pub fn build(params: &WeightParams, n_max: usize, ctx: &PrecisionContext) -> Result<Self> {
        with_escalation(ctx, |c| Self::build_with_step(params, n_max, &c.fd_step(), c))
    }

    pub fn build_with_step(
        params: &WeightParams,
        n_max: usize,
        h: &BigReal,
        ctx: &PrecisionContext,
    ) -> Result<Self> {
        let h = ctx.adopt(h);
        if !h.is_positive() {
            return Err(Error::domain("stencil step must be positive"));
        }
        let t = ctx.adopt(params.t());
        if !(&t - h.mul_pow2(1)).is_positive() {
            return Err(Error::domain("stencil reaches t <= 0; reduce the step"));
        }
        let points: Vec<BigReal> = (-2..=2).map(|k| &t + &h * k).collect();
        let tables = points
            .par_iter()
            .map(|tk| {
                let w = params.with_t(tk.clone())?;
                RecurrenceTable::compute_at(&w, n_max, ctx)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StencilBundle {
            params: tables[2].params.clone(),
            n_max,
            t_center: t,
            h,
            tables,
        })
    }

    pub fn context(&self) -> PrecisionContext {
        self.tables[2].context()
    }

    pub fn center(&self) -> &RecurrenceTable {
        &self.tables[2]
    }

    /// Samples `f` on the five tables and forms the stencil derivatives.
    pub fn jet<F>(&self, f: F) -> Result<Jet>
    where
        F: Fn(&RecurrenceTable) -> Result<BigReal>,
    {
        let v: Vec<BigReal> = self.tables.iter().map(&f).collect::<Result<_>>()?;
        let s = [&v[0], &v[1], &v[2], &v[3], &v[4]];
        Ok(Jet {
            d1: stencil_combination(s, &self.h, DerivativeOrder::First),
            d2: stencil_combination(s, &self.h, DerivativeOrder::Second),
            value: v[2].clone(),
        })
    }
}
