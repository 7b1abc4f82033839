use crate::error::{Error, Result};
use crate::orthopoly::{RecurrenceTable, WeightParams};
use crate::precision::{BigReal, PrecisionContext};

use super::series::{expansion_eval, ExpansionSeries, SeriesKind, C0_TILDE, C1_TILDE};

/// Least-squares slope of `ln|exact − partial sum|` against `ln n`.
#[derive(Clone, Debug)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    /// Degrees that entered the fit.
    pub used: Vec<usize>,
    /// Degrees dropped because the error reached the precision floor.
    pub excluded: Vec<usize>,
    /// `(n, exact − partial sum)` for every input point.
    pub errors: Vec<(usize, BigReal)>,
}

/// Pulls the exact counterpart of `kind` out of a table.
pub fn exact_values(
    kind: SeriesKind,
    table: &RecurrenceTable,
    ns: &[usize],
) -> Result<Vec<(usize, BigReal)>> {
    ns.iter()
        .map(|&n| {
            let v = match kind {
                SeriesKind::Beta => table.beta(n)?,
                SeriesKind::P => table.p(n)?,
                SeriesKind::Sigma => table.sigma(n)?,
                SeriesKind::LogD => table.log_d(n)?,
                SeriesKind::ASeries | SeriesKind::FSeries => {
                    return Err(Error::domain(format!(
                        "{kind} has no finite-n counterpart in the recurrence table"
                    )))
                }
            };
            Ok((n, v.clone()))
        })
        .collect()
}

/// Fits the decay rate of the truncation error after all terms with
/// exponent `≥ −order/3`.
pub fn decay_fit(
    exact: &[(usize, BigReal)],
    series: &ExpansionSeries,
    order: i32,
) -> Result<DecayFit> {
    let ctx = series.context();
    let mut errors = Vec::with_capacity(exact.len());
    let mut used = Vec::new();
    let mut excluded = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (n, value) in exact {
        let value = ctx.adopt(value);
        let err = &value - expansion_eval(series, &ctx.int(*n as i64), order)?;
        // half the working digits are kept in reserve for Hankel conditioning
        let floor = (value.abs() + 1) * ctx.pow2(-(ctx.bits() as i32) / 2);
        if err.abs() <= floor {
            excluded.push(*n);
        } else {
            used.push(*n);
            xs.push((*n as f64).ln());
            ys.push(err.abs().ln().to_f64());
        }
        errors.push((*n, err));
    }
    let (lo, hi) = match (used.iter().min(), used.iter().max()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Err(Error::Degenerate("no points above the precision floor".into())),
    };
    if used.len() < 4 || lo == 0 || hi < 4 * lo {
        return Err(Error::Degenerate(format!(
            "decay fit needs at least 4 points spanning a factor of 4, got {} in [{lo}, {hi}]",
            used.len()
        )));
    }
    let (slope, intercept) = least_squares_line(&xs, &ys);
    Ok(DecayFit {
        slope,
        intercept,
        used,
        excluded,
        errors,
    })
}

fn least_squares_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Clone, Debug)]
pub struct LogDConstants {
    pub c1_tilde: BigReal,
    pub c0_tilde: BigReal,
    /// `|c̃₁ − α ln 4|`.
    pub conjecture_gap: BigReal,
    /// Degrees used to pin down the constants.
    pub fit_points: (usize, usize),
    /// `(n, exact − prediction)` at the remaining degrees.
    pub holdout: Vec<(usize, BigReal)>,
    /// The ln D_n series with both constants filled in.
    pub series: ExpansionSeries,
}

/// Determines `c̃₁, c̃₀` from the two largest degrees in `exact`, treating
/// every closed-form term through `n^{−2/3}` as known, and measures the
/// prediction error at the other degrees.
pub fn fit_logd_constants(
    exact: &[(usize, BigReal)],
    params: &WeightParams,
    ctx: &PrecisionContext,
) -> Result<LogDConstants> {
    let mut pts: Vec<(usize, BigReal)> = exact.iter().map(|(n, v)| (*n, ctx.adopt(v))).collect();
    pts.sort_by_key(|(n, _)| *n);
    pts.dedup_by_key(|(n, _)| *n);
    if pts.len() < 2 {
        return Err(Error::Degenerate("need two distinct degrees".into()));
    }
    let (n2, v2) = pts.pop().unwrap();
    let (n1, v1) = pts.pop().unwrap();
    if n1 == 0 {
        return Err(Error::Degenerate("degree 0 cannot enter the fit".into()));
    }
    let base = ExpansionSeries::new(SeriesKind::LogD, params, ctx)
        .with_constant(C1_TILDE, ctx.zero())
        .with_constant(C0_TILDE, ctx.zero());
    let order = -base.lowest_thirds();
    // ln D_n − known(n) = −c̃₁ n − c̃₀
    let g1 = v1 - expansion_eval(&base, &ctx.int(n1 as i64), order)?;
    let g2 = v2 - expansion_eval(&base, &ctx.int(n2 as i64), order)?;
    let dn = ctx.int(n2 as i64 - n1 as i64);
    let c1 = -(&g2 - &g1) / dn;
    let c0 = -(g1 + &c1 * ctx.int(n1 as i64));
    let series = base
        .with_constant(C1_TILDE, c1.clone())
        .with_constant(C0_TILDE, c0.clone());
    let holdout = pts
        .iter()
        .map(|(n, v)| Ok((*n, v - expansion_eval(&series, &ctx.int(*n as i64), order)?)))
        .collect::<Result<Vec<_>>>()?;
    let (alpha, _) = params.at(ctx);
    let conjecture_gap = (&c1 - alpha * ctx.ln2().mul_pow2(1)).abs();
    Ok(LogDConstants {
        c1_tilde: c1,
        c0_tilde: c0,
        conjecture_gap,
        fit_points: (n1, n2),
        holdout,
        series,
    })
}
