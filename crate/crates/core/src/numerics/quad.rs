//! Doubly-exponential quadrature with nested node levels.
//!
//! Finite intervals use the tanh-sinh map, half-lines the exp-sinh map
//! `t = a + exp(pi/2 sinh u)`. Level `L` uses step `2^-L` in `u`; each level
//! adds only the odd multiples of the new step, so function values are
//! reused across levels. The discretization error at level `L` is estimated
//! by the difference to level `L - 1` and added to the output radius.

use rayon::prelude::*;
use rug::float::Round;
use rug::Float;

use super::ball::{Ball, RAD_PREC};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Domain {
    Finite { a: Float, b: Float },
    SemiInfinite { a: Float },
}

#[derive(Clone, Debug)]
pub struct QuadratureConfig {
    /// Deepest node-doubling level evaluated.
    pub level: u32,
    pub target_tol: f64,
    pub domain: Domain,
}

/// One node of a doubly-exponential rule: an exact abscissa and a weight
/// enclosure (the step `h` is applied separately).
#[derive(Clone, Debug)]
pub struct DeNode {
    pub t: Float,
    pub w: Ball,
}

/// Node generator for one integration domain at fixed working precision.
#[derive(Clone, Debug)]
pub struct DeRule {
    domain: Domain,
    prec: u32,
    u_lo: f64,
    u_hi: f64,
}

impl DeRule {
    /// Tanh-sinh rule on `[a, b]` with the `u`-window chosen so that the
    /// endpoint weights fall below `2^-prec`.
    pub fn finite(a: Float, b: Float, prec: u32) -> DeRule {
        let s = (f64::from(prec) + 10.0) * std::f64::consts::LN_2 / std::f64::consts::PI;
        let u = s.asinh() + 0.05;
        DeRule { domain: Domain::Finite { a, b }, prec, u_lo: -u, u_hi: u }
    }

    /// Exp-sinh rule on `[a, u_hi]`-window; `u_hi` fixes the far truncation.
    pub fn semi_infinite(a: Float, u_hi: f64, prec: u32) -> DeRule {
        let s = 2.0 * (f64::from(prec) + 10.0) * std::f64::consts::LN_2 / std::f64::consts::PI;
        DeRule { domain: Domain::SemiInfinite { a }, prec, u_lo: -(s.asinh()), u_hi }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn u_window(&self) -> (f64, f64) {
        (self.u_lo, self.u_hi)
    }

    /// Abscissa of the exp-sinh map at `u` (for choosing truncation points).
    pub fn exp_sinh_abscissa(a: &Float, u: f64, prec: u32) -> Float {
        let half_pi = Ball::pi(prec).mul_2exp(-1);
        let s = half_pi.mul_ref(&Ball::from_f64(u.sinh(), prec));
        Float::with_val(prec, a + s.exp().mid())
    }

    fn node(&self, u: f64) -> DeNode {
        let p = self.prec;
        let half_pi = Ball::pi(p).mul_2exp(-1);
        let ub = Ball::from_f64(u, p);
        let eu = ub.exp();
        let emu = ub.neg().exp();
        let sinh = eu.sub_ref(&emu).mul_2exp(-1);
        let cosh = eu.add_ref(&emu).mul_2exp(-1);
        let s = half_pi.mul_ref(&sinh);
        match &self.domain {
            Domain::Finite { a, b } => {
                let c = Ball::exact(Float::with_val(p, b - a)).mul_2exp(-1);
                // 1 - tanh|s| = 2 / (exp(2|s|) + 1)
                let abs_s = s.abs();
                let e2 = abs_s.mul_2exp(1).exp();
                let one = Ball::one(p);
                let gap = Ball::from_i64(2, p).div_ref(&e2.add_ref(&one)).expect("positive");
                let off = c.mul_ref(&gap);
                let t = if u >= 0.0 {
                    Float::with_val(p, b - off.mid())
                } else {
                    Float::with_val(p, a + off.mid())
                };
                // cosh^2 s = (e^{2s} + 2 + e^{-2s}) / 4
                let em2 = abs_s.mul_2exp(1).neg().exp();
                let cosh2 = e2.add_ref(&em2).add_ref(&Ball::from_i64(2, p)).mul_2exp(-2);
                let w = c.mul_ref(&half_pi).mul_ref(&cosh).div_ref(&cosh2).expect("positive");
                DeNode { t, w }
            }
            Domain::SemiInfinite { a } => {
                let es = s.exp();
                let t = Float::with_val(p, a + es.mid());
                let w = half_pi.mul_ref(&cosh).mul_ref(&es);
                DeNode { t, w }
            }
        }
    }

    /// Nodes that are new at `level` (all nodes for level 0).
    pub fn level_nodes(&self, level: u32) -> Vec<DeNode> {
        let h = (-(level as f64)).exp2();
        let lo = (self.u_lo / h).ceil() as i64;
        let hi = (self.u_hi / h).floor() as i64;
        (lo..=hi)
            .filter(|j| level == 0 || j.rem_euclid(2) == 1)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|j| self.node(j as f64 * h))
            .collect()
    }

    /// Nodes at the two ends of the window, used for truncation estimates.
    pub fn end_nodes(&self, level: u32) -> (DeNode, DeNode) {
        let h = (-(level as f64)).exp2();
        let lo = (self.u_lo / h).ceil() * h;
        let hi = (self.u_hi / h).floor() * h;
        (self.node(lo), self.node(hi))
    }
}

fn step(level: u32, prec: u32) -> Ball {
    Ball::one(prec).mul_2exp(-(level as i32))
}

fn abs_diff(a: &Ball, b: &Ball) -> Float {
    let d = Float::with_val(RAD_PREC.max(64), a.mid() - b.mid());
    Float::with_val_round(RAD_PREC, &*d.as_abs(), Round::Up).0
}

/// Integrates `f` over `cfg.domain`.
///
/// For half-lines `tail(T)` must bound `int_T^inf |f|`. The radius of the
/// result holds the rounding error, the level-difference estimate and the
/// truncation bounds. If `target_tol` is not reached by `cfg.level` the
/// result simply carries the larger radius.
pub fn quadrature_de<F>(f: F, cfg: &QuadratureConfig, prec: u32, tail: Option<&dyn Fn(&Float) -> Float>) -> Result<Ball>
where
    F: Fn(&Ball) -> Ball + Sync,
{
    if !(cfg.target_tol > 0.0) {
        return Err(Error::Invalid("target_tol must be positive".into()));
    }
    let wp = prec + 32;
    let mut left_end: Option<Float> = None;
    let (rule, trunc) = match &cfg.domain {
        Domain::Finite { a, b } => {
            if a >= b {
                return Err(Error::Invalid("finite domain needs a < b".into()));
            }
            (DeRule::finite(Float::with_val(wp, a), Float::with_val(wp, b), wp), Float::new(RAD_PREC))
        }
        Domain::SemiInfinite { a } => {
            let tail = tail.ok_or_else(|| Error::Invalid("half-line quadrature requires a tail bound".into()))?;
            let a = Float::with_val(wp, a);
            left_end = Some(a.clone());
            // widen the window in quarter steps until the far tail is negligible
            let goal = cfg.target_tol / 64.0;
            let mut u_hi = 1.0;
            let mut bound = tail(&DeRule::exp_sinh_abscissa(&a, u_hi, wp));
            while bound.to_f64() > goal && u_hi < 8.0 {
                u_hi += 0.25;
                bound = tail(&DeRule::exp_sinh_abscissa(&a, u_hi, wp));
            }
            (DeRule::semi_infinite(a, u_hi, wp), bound)
        }
    };
    let eval = |nodes: &[DeNode]| -> Ball {
        let terms: Vec<Ball> = nodes.par_iter().map(|n| n.w.mul_ref(&f(&Ball::exact(n.t.clone())))).collect();
        terms.iter().fold(Ball::zero(wp), |acc, t| acc.add_ref(t))
    };
    let mut total = eval(&rule.level_nodes(0));
    let mut prev = total.mul_ref(&step(0, wp));
    let mut best: Option<Ball> = None;
    for level in 1..=cfg.level.max(1) {
        total = total.add_ref(&eval(&rule.level_nodes(level)));
        let cur = total.mul_ref(&step(level, wp));
        let (lo_end, hi_end) = rule.end_nodes(level);
        let h = step(level, wp);
        let end_lo = h.mul_ref(&lo_end.w).mul_ref(&f(&Ball::exact(lo_end.t.clone()))).mag();
        let end_hi = h.mul_ref(&hi_end.w).mul_ref(&f(&Ball::exact(hi_end.t.clone()))).mag();
        let mut err = abs_diff(&cur, &prev);
        err = Float::with_val_round(RAD_PREC, &err + &trunc, Round::Up).0;
        err = Float::with_val_round(RAD_PREC, &err + &end_lo, Round::Up).0;
        err = Float::with_val_round(RAD_PREC, &err + &end_hi, Round::Up).0;
        if let Some(a) = &left_end {
            // mass of [a, first node]: width times a generous multiple of the end value
            let width = Float::with_val_round(RAD_PREC, &lo_end.t - a, Round::Up).0;
            let fv = f(&Ball::exact(lo_end.t.clone())).mag();
            let near = Float::with_val_round(RAD_PREC, &width * &fv, Round::Up).0 * 2u32;
            err = Float::with_val_round(RAD_PREC, &err + &near, Round::Up).0;
        }
        let candidate = cur.add_error(&err).set_prec(prec);
        let better = match &best {
            None => true,
            Some(b) => candidate.rad() < b.rad(),
        };
        if better {
            best = Some(candidate);
        }
        prev = cur;
        if level >= 3 && best.as_ref().unwrap().rad().to_f64() <= cfg.target_tol {
            break;
        }
    }
    Ok(best.unwrap())
}
