use super::table::RecurrenceTable;
use crate::error::{Error, Result};
use crate::precision::{BigReal, PrecisionContext};

/// Monomial coefficients of the monic P_n, lowest degree first.
#[derive(Clone, Debug)]
pub struct PolyCoeffs {
    pub n: usize,
    pub coeffs: Vec<BigReal>,
}

impl PolyCoeffs {
    /// `(P(z), P′(z), P″(z))` by a single Horner sweep.
    pub fn eval_with_derivatives(&self, z: &BigReal) -> (BigReal, BigReal, BigReal) {
        let zero = PrecisionContext::new(z.bits()).expect("valid precision").zero();
        let mut p = zero.clone();
        let mut dp = zero.clone();
        let mut ddp = zero;
        for c in self.coeffs.iter().rev() {
            ddp = &ddp * z + dp.mul_pow2(1);
            dp = &dp * z + &p;
            p = &p * z + c;
        }
        (p, dp, ddp)
    }

    pub fn eval(&self, z: &BigReal) -> BigReal {
        self.eval_with_derivatives(z).0
    }
}

/// P_0..P_n from `P_{k+1} = z P_k − β_k P_{k−1}` (the weight is even, so
/// there is no diagonal term).
pub fn polynomial_coeffs(table: &RecurrenceTable, n: usize) -> Result<Vec<PolyCoeffs>> {
    if n > table.n_max {
        return Err(Error::OutOfRange {
            what: "polynomial degree",
            index: n,
            max: table.n_max,
        });
    }
    let ctx: PrecisionContext = table.context();
    let mut out: Vec<PolyCoeffs> = Vec::with_capacity(n + 1);
    out.push(PolyCoeffs {
        n: 0,
        coeffs: vec![ctx.one()],
    });
    for k in 0..n {
        let mut next = vec![ctx.zero(); k + 2];
        for (i, c) in out[k].coeffs.iter().enumerate() {
            next[i + 1] += c;
        }
        if k >= 1 {
            let beta = &table.beta[k];
            for (i, c) in out[k - 1].coeffs.iter().enumerate() {
                next[i] -= beta * c;
            }
        }
        out.push(PolyCoeffs {
            n: k + 1,
            coeffs: next,
        });
    }
    Ok(out)
}
