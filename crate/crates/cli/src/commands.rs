use pjlab::coulomb::{
    check_equilibrium, decay_fit, exact_values, expansion_eval, fit_logd_constants, solve_support,
    ExpansionSeries, SeriesKind,
};
use pjlab::orthopoly::{build_moments, moments_by_quadrature, RecurrenceTable, WeightParams};
use pjlab::painleve::{
    check_painleve_v, check_riccati, check_second_order_odes, check_sigma_definition,
    check_sigma_ode, check_t_evolution, StencilBundle,
};
use pjlab::precision::decimal_digits_for;
use pjlab::relations::{
    check_compatibility, check_lowering, check_polynomial_ode, residual_beta_difference,
    residual_p_difference, residual_sigma_difference, sort_reports, RelationId, ResidualReport,
};
use pjlab::{BigReal, Error, PrecisionContext, Result};
use rayon::prelude::*;

use crate::config::{default_bits, parse_grid, Common, Quantity, Suite};
use crate::output::{Cell, Report};

/// A finished command: its report and whether every check passed.
pub struct Outcome {
    pub report: Report,
    pub pass: bool,
}

fn dec(x: &BigReal) -> Cell {
    Cell::Text(x.to_decimal(decimal_digits_for(x.bits())))
}

fn short(x: &BigReal) -> Cell {
    Cell::Text(x.to_decimal(20))
}

pub fn moments(common: &Common, k_max: usize) -> Result<Outcome> {
    let ctx = common.context(default_bits(k_max / 2))?;
    let params = common.params(&ctx)?;
    let closed = build_moments(&params, k_max, &ctx)?.mu;
    let quad = moments_by_quadrature(&params, k_max, &ctx)?;
    let limit = ctx.pow2(-(ctx.bits() as i32) / 2 + 16);
    let mut report = Report::new(&["k", "mu_closed", "mu_quad", "rel_gap"]);
    let mut pass = true;
    for k in 0..=k_max {
        // odd moments vanish, so their gap is measured against the even one below
        let scale = if k % 2 == 0 { &closed[k] } else { &closed[k - 1] };
        let gap = (&quad[k] - &closed[k]).abs() / scale;
        pass &= gap <= limit;
        report.push(vec![Cell::Int(k as i64), dec(&closed[k]), dec(&quad[k]), short(&gap)]);
    }
    Ok(Outcome { report, pass })
}

fn degrees(n_max: usize, n: Option<usize>, min: usize) -> Result<Vec<usize>> {
    match n {
        Some(n) if n < min => Err(Error::domain(format!("this suite needs n >= {min}"))),
        Some(n) => Ok(vec![n]),
        None if n_max < min => Err(Error::domain(format!("--n-max must be at least {min}"))),
        None => Ok((min.max(1)..=n_max).collect()),
    }
}

fn z_samples(ctx: &PrecisionContext) -> Vec<BigReal> {
    [(0, 1), (1, 2), (-1, 2), (9, 10), (-9, 10)]
        .iter()
        .map(|&(p, q)| ctx.ratio(p, q))
        .collect()
}

/// Keeps the worst sample point per (relation, n).
fn worst_per_degree(reports: Vec<ResidualReport>) -> Vec<ResidualReport> {
    let mut out: Vec<ResidualReport> = Vec::new();
    for r in reports {
        match out
            .iter_mut()
            .find(|o| o.relation_id == r.relation_id && o.n == r.n)
        {
            Some(o) if r.relative > o.relative => *o = r,
            Some(_) => {}
            None => out.push(r),
        }
    }
    out
}

fn table_reports(
    suite: Suite,
    params: &WeightParams,
    ns: &[usize],
    ctx: &PrecisionContext,
) -> Result<Vec<ResidualReport>> {
    let top = *ns.iter().max().expect("non-empty degree list");
    let table = RecurrenceTable::compute(params, top + 2, ctx)?;
    let tctx = table.context();
    let zs = z_samples(&tctx);
    let per_n = ns
        .par_iter()
        .map(|&n| -> Result<Vec<ResidualReport>> {
            Ok(match suite {
                Suite::Identities => check_compatibility(&table, n)?,
                Suite::Difference => vec![
                    residual_beta_difference(&table, n)?,
                    residual_p_difference(&table, n)?,
                    residual_sigma_difference(&table, n)?,
                ],
                Suite::Polyode => {
                    let mut v = check_polynomial_ode(&table, n, &zs)?;
                    for z in &zs {
                        v.push(check_lowering(&table, n, z)?);
                    }
                    worst_per_degree(v)
                }
                _ => unreachable!("differential suites use the stencil"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

fn stencil_reports(
    suite: Suite,
    params: &WeightParams,
    ns: &[usize],
    ctx: &PrecisionContext,
) -> Result<Vec<ResidualReport>> {
    let top = *ns.iter().max().expect("non-empty degree list");
    let bundle = StencilBundle::build(params, top + 1, ctx)?;
    let per_n = ns
        .par_iter()
        .map(|&n| -> Result<Vec<ResidualReport>> {
            Ok(match suite {
                Suite::Evolution => check_t_evolution(&bundle, n)?,
                Suite::Riccati => check_riccati(&bundle, n)?,
                Suite::Odes => check_second_order_odes(&bundle, n)?,
                Suite::Painleve => vec![check_painleve_v(&bundle, n)?],
                Suite::Sigmaode => vec![
                    check_sigma_ode(&bundle, n)?,
                    check_sigma_definition(&bundle, n)?,
                ],
                _ => unreachable!("table suites do not need the stencil"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

pub fn verify(common: &Common, suite: Suite, n_max: usize, n: Option<usize>) -> Result<Outcome> {
    let min = match suite {
        Suite::Identities | Suite::Evolution | Suite::Painleve => 0,
        _ => 1,
    };
    let mut ns = degrees(n_max, n, min)?;
    if suite == Suite::Difference && n.is_none() {
        // the three-term differences need n + 1 inside the table
        ns.retain(|&k| k < n_max);
        if ns.is_empty() {
            return Err(Error::domain("--n-max must be at least 2 for the difference suite"));
        }
    }
    let top = *ns.iter().max().expect("non-empty");
    let policy = if suite.is_differential() {
        // the stencil step 2^(-bits/4) needs room for two derivatives
        default_bits(top + 1).max(512)
    } else {
        default_bits(top + 2)
    };
    let ctx = common.context(policy)?;
    let params = common.params(&ctx)?;
    let tolerance = common.tolerance(&ctx)?;
    let mut reports = if suite.is_differential() {
        stencil_reports(suite, &params, &ns, &ctx)?
    } else {
        table_reports(suite, &params, &ns, &ctx)?
    };
    if let Some(tol) = &tolerance {
        reports = reports.into_iter().map(|r| r.with_tolerance(tol)).collect();
    }
    sort_reports(&mut reports);
    let mut report = Report::new(&["relation", "n", "alpha", "t", "bits", "residual", "relative", "pass"]);
    let pass = reports.iter().all(|r| r.pass);
    for r in &reports {
        report.push(vec![
            Cell::Text(r.relation_id.label().to_string()),
            Cell::Int(r.n as i64),
            Cell::Text(common.alpha.clone()),
            Cell::Text(common.t.clone()),
            Cell::Int(r.bits as i64),
            dec(&r.residual),
            dec(&r.relative),
            Cell::Flag(r.pass),
        ]);
    }
    Ok(Outcome { report, pass })
}

fn series_kind(q: Quantity) -> SeriesKind {
    match q {
        Quantity::Beta => SeriesKind::Beta,
        Quantity::P => SeriesKind::P,
        Quantity::Sigma => SeriesKind::Sigma,
        Quantity::Logd => SeriesKind::LogD,
    }
}

fn default_order(q: Quantity) -> i32 {
    match q {
        Quantity::Beta => 8,
        Quantity::P => 4,
        Quantity::Sigma | Quantity::Logd => 2,
    }
}

/// Exponent of the first omitted term with a non-zero coefficient.
fn expected_slope(series: &ExpansionSeries, order: i32) -> f64 {
    let mut j = order + 1;
    while series.coefficient(-j).is_some_and(|c| c.is_zero()) {
        j += 1;
    }
    -(j as f64) / 3.0
}

pub fn asymptotics(
    common: &Common,
    q: Quantity,
    grid: &str,
    order: Option<i32>,
) -> Result<Outcome> {
    let ns = parse_grid(grid)?;
    let top = *ns.iter().max().expect("grid is non-empty");
    let ctx = common.context(default_bits(top + 1).max(2048))?;
    let params = common.params(&ctx)?;
    let order = order.unwrap_or(default_order(q));
    let kind = series_kind(q);
    let table = RecurrenceTable::compute(&params, top + 1, &ctx)?;
    let tctx = table.context();
    let exact = exact_values(kind, &table, &ns)?;
    let mut report = Report::new(&["n", "exact", "partial_sum", "error"]);

    let series = if kind == SeriesKind::LogD {
        let fit = fit_logd_constants(&exact, &params, &tctx)?;
        report.note("c1_tilde", dec(&fit.c1_tilde));
        report.note("c0_tilde", dec(&fit.c0_tilde));
        report.note("conjecture_gap", short(&fit.conjecture_gap));
        report.note("fit_n", Cell::Text(format!("{}:{}", fit.fit_points.0, fit.fit_points.1)));
        let worst = fit
            .holdout
            .iter()
            .map(|(_, e)| e.abs())
            .fold(tctx.zero(), |a, b| a.max(b));
        report.note("holdout_max_error", short(&worst));
        fit.series
    } else {
        ExpansionSeries::new(kind, &params, &tctx)
    };
    for (n, v) in &exact {
        let s = expansion_eval(&series, &tctx.int(*n as i64), order)?;
        let err = v - &s;
        report.push(vec![Cell::Int(*n as i64), dec(v), dec(&s), short(&err)]);
    }
    let mut pass = true;
    if kind != SeriesKind::LogD {
        let fit = decay_fit(&exact, &series, order)?;
        let want = expected_slope(&series, order);
        pass = (fit.slope - want).abs() <= 0.15;
        report.note("order", Cell::Int(order as i64));
        report.note("slope", Cell::Text(format!("{:.6}", fit.slope)));
        report.note("expected_slope", Cell::Text(format!("{want:.6}")));
        let excluded: Vec<String> = fit.excluded.iter().map(|n| n.to_string()).collect();
        report.note("excluded", Cell::Text(excluded.join(" ")));
        report.note("pass", Cell::Flag(pass));
    }
    Ok(Outcome { report, pass })
}

pub fn density(common: &Common, n: &str, samples: usize) -> Result<Outcome> {
    if samples < 2 {
        return Err(Error::domain("--samples must be at least 2"));
    }
    let ctx = common.context(256)?;
    let params = common.params(&ctx)?;
    let n = ctx.parse(n)?;
    let m = solve_support(&params, &n, &ctx)?;
    let mut report = Report::new(&["x", "density"]);
    let last = samples as i64 - 1;
    for i in 0..samples as i64 {
        let x = if i == last {
            m.b.clone()
        } else {
            -&m.b + m.b.mul_pow2(1) * ctx.ratio(i, last)
        };
        report.push(vec![dec(&x), dec(&m.density(&x)?)]);
    }
    let norm = ((m.mass()? - &n) / &n).abs();
    let xs: Vec<BigReal> = [(0, 1), (1, 2), (-1, 2), (9, 10), (-9, 10)]
        .iter()
        .map(|&(p, q)| &m.b * ctx.ratio(p, q))
        .collect();
    let checks = check_equilibrium(&m, &xs)?;
    let worst = |id: RelationId| {
        checks
            .iter()
            .filter(|r| r.relation_id == id)
            .map(|r| r.relative.clone())
            .fold(ctx.zero(), |a, b| a.max(b))
    };
    let eq = worst(RelationId::Equilibrium);
    let sie = worst(RelationId::SingularEquilibrium);
    let eq_limit = common.tolerance(&ctx)?.unwrap_or_else(|| ctx.parse("1e-20").unwrap());
    let pass = norm <= ctx.parse("1e-30")? && eq <= eq_limit;
    report.note("b", dec(&m.b));
    report.note("u", dec(&m.u));
    report.note("multiplier", dec(&m.a_mult));
    report.note("normalization_gap", short(&norm));
    report.note("equilibrium_max", short(&eq));
    report.note("sie_max", short(&sie));
    report.note("pass", Cell::Flag(pass));
    Ok(Outcome { report, pass })
}
