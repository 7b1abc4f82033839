//! The positive real root of `c3·u³ + c2·u² + c0 = 0`.

use super::{BigReal, PrecisionContext};
use crate::error::{Error, Result};

/// Root in `(0, 1)` of `c3·u³ + c2·u² + c0` for `c3 > 0`, `c0 < 0`.
///
/// Starts from Cardano's closed form (the shape `C + (c2/3c3)²/C` shifted by
/// `−c2/3c3`) and polishes with Newton steps to full precision.
pub fn real_cubic_root(
    c3: &BigReal,
    c2: &BigReal,
    c0: &BigReal,
    ctx: &PrecisionContext,
) -> Result<BigReal> {
    if !c3.is_positive() || !c0.is_negative() {
        return Err(Error::domain("cubic root needs c3 > 0 and c0 < 0"));
    }
    let (c3, c2, c0) = (ctx.adopt(c3), ctx.adopt(c2), ctx.adopt(c0));
    let f = |u: &BigReal| (&c3 * u + &c2) * u.square() + &c0;
    let df = |u: &BigReal| (&c3 * u * 3 + c2.mul_pow2(1)) * u;

    if !(f(&ctx.one()).is_positive()) {
        return Err(Error::Invariant(
            "cubic has no sign change on (0, 1)".to_string(),
        ));
    }

    let p = &c2 / &c3;
    let q = &c0 / &c3;
    // depressed cubic y³ + P y + Q with u = y − p/3
    let p_third = &p / 3;
    let big_p = -(p_third.square() * 3);
    let big_q = p_third.powi(3) * 2 + &q;
    let half_q = big_q.mul_pow2(-1);
    let disc = half_q.square() + (&big_p / 3).powi(3);

    let mut u = if !disc.is_negative() {
        let root = disc.sqrt();
        let cube = if half_q.is_positive() {
            -(half_q + root)
        } else {
            root - half_q
        };
        let y = if cube.is_zero() {
            ctx.zero()
        } else {
            let c = cube.abs().cbrt() * if cube.is_negative() { -1 } else { 1 };
            &c - &big_p / (&c * 3)
        };
        y - &p_third
    } else {
        ctx.ratio(1, 2)
    };
    if !(u.is_positive() && u < 1) {
        u = ctx.ratio(1, 2);
    }

    let tol = ctx.pow2(-(ctx.bits() as i32) + 2);
    let (mut lo, mut hi) = (ctx.zero(), ctx.one());
    for _ in 0..(4 * ctx.bits() as usize) {
        let fu = f(&u);
        if fu.is_zero() {
            return Ok(u);
        }
        if fu.is_negative() {
            lo = u.clone();
        } else {
            hi = u.clone();
        }
        let slope = df(&u);
        let mut next = if slope.is_positive() {
            &u - &fu / &slope
        } else {
            ctx.zero()
        };
        if !(next > lo && next < hi) {
            next = (&lo + &hi).mul_pow2(-1);
        }
        let step = (&next - &u).abs();
        u = next;
        if step <= &tol * &u {
            return Ok(u);
        }
    }
    Err(Error::Invariant("cubic root iteration failed to settle".to_string()))
}
