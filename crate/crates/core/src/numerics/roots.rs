use rug::Float;

use super::ball::Ball;
use super::sign::SignTag;
use crate::error::{Error, Result};

/// Bisection for `g(x) = target` with `g` strictly increasing on `[lo, hi]`.
///
/// Returns a ball of width at most `tol` containing the root. When the
/// midpoint comparison cannot be decided the root is pinned by probing
/// `mid -/+ tol/2` instead.
pub fn solve_monotone<G>(g: G, target: &Ball, lo: &Float, hi: &Float, tol: f64) -> Result<Ball>
where
    G: Fn(&Ball) -> Result<Ball>,
{
    if !(tol > 0.0) || lo > hi {
        return Err(Error::Invalid("solve_monotone needs tol > 0 and lo <= hi".into()));
    }
    let prec = target.prec().max(lo.prec()).max(hi.prec()).max(64);
    let diff = |x: &Float| -> Result<SignTag> {
        let v = g(&Ball::exact(Float::with_val(prec, x)))?;
        Ok(SignTag::of(&v.sub_ref(target)))
    };
    let bracket_err = || Error::Bracket { lo: lo.to_f64(), hi: hi.to_f64() };
    let mut a = Float::with_val(prec, lo);
    let mut b = Float::with_val(prec, hi);
    match diff(&a)? {
        SignTag::Zero => return Ok(Ball::exact(a)),
        SignTag::Positive => return Err(bracket_err()),
        _ => {}
    }
    match diff(&b)? {
        SignTag::Zero => return Ok(Ball::exact(b)),
        SignTag::Negative => return Err(bracket_err()),
        _ => {}
    }
    let half_tol = Float::with_val(prec, tol / 2.0);
    loop {
        let width = Float::with_val(prec, &b - &a);
        if width <= tol {
            return Ok(Ball::from_endpoints(&a, &b, prec));
        }
        let m = Float::with_val(prec, &a + &b) / 2u32;
        match diff(&m)? {
            SignTag::Zero => return Ok(Ball::exact(m)),
            SignTag::Positive => b = m,
            SignTag::Negative => a = m,
            SignTag::Undetermined => {
                let l = Float::with_val(prec, &m - &half_tol);
                let r = Float::with_val(prec, &m + &half_tol);
                let left_ok = l <= a || diff(&l)? == SignTag::Negative;
                let right_ok = r >= b || diff(&r)? == SignTag::Positive;
                if left_ok && right_ok {
                    let l = if l < a { a } else { l };
                    let r = if r > b { b } else { r };
                    return Ok(Ball::from_endpoints(&l, &r, prec));
                }
                return Err(Error::Precision {
                    bits: prec,
                    what: format!("cannot separate the root near {} at tolerance {tol:e}", m.to_f64()),
                });
            }
        }
    }
}
