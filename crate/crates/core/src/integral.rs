//! Saddle radii and the torus-integral representation of Toeplitz minors.
//!
//! For `f(z) = sum a_j z^j` and `r = e^eta`,
//!
//! ```text
//! A_k^nu nu! (2 pi)^nu r^{k nu}
//!   = int_{[-pi, pi]^nu} Re prod_j e^{-i k t_j} f(r e^{i t_j})
//!     prod_{a < b} 4 sin^2((t_a - t_b) / 2) dt.
//! ```
//!
//! `i_k_nu` evaluates the right-hand side divided by `f(r)^nu` with a
//! tensor trapezoid rule, which is spectrally accurate for periodic
//! integrands.

use rayon::prelude::*;
use rug::{Float, Rational};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::{solve_monotone, Ball, ComplexBall, Real, Sign, SignTag};
use crate::toeplitz::{toeplitz_minor, ScaleRecord, SequenceWindow, WindowSource};
use crate::xicoeffs::{CoeffTable, PowerSeries, TailModel};

/// `b(eta) = log f(e^eta)` and its first two derivatives.
#[derive(Clone, Debug)]
pub struct LogSeries {
    series: PowerSeries,
}

/// `(S_0, S_1, S_2)` with `S_j = sum k^j a_k r^k`.
fn weighted_sums(s: &PowerSeries, eta: &Ball) -> Result<[Ball; 3]> {
    let m = s.moments(&eta.exp(), 2)?;
    Ok([m[0].clone(), m[1].clone(), m[2].clone()])
}

impl LogSeries {
    pub fn new(series: PowerSeries) -> LogSeries {
        LogSeries { series }
    }

    /// Polynomial windows are summed in full; truncated windows need
    /// positive log-concave coefficients for the tail bound.
    pub fn from_window(w: &SequenceWindow, prec: u32) -> Result<LogSeries> {
        let coeffs: Vec<Ball> = w.coeffs().iter().map(|c| c.to_ball(prec)).collect();
        let tail = match w.source() {
            WindowSource::Polynomial => TailModel::Polynomial,
            WindowSource::TruncatedSeries => TailModel::LogConcave,
        };
        Ok(LogSeries { series: PowerSeries::new(coeffs, tail, 1e-30)?.with_tol_bits(prec) })
    }

    pub fn from_table(t: &CoeffTable) -> Result<LogSeries> {
        Ok(LogSeries { series: t.series()? })
    }

    /// Relative truncation cutoff `2^-bits` for all sums.
    pub fn with_tol_bits(self, bits: u32) -> LogSeries {
        LogSeries { series: self.series.with_tol_bits(bits) }
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    pub fn prec(&self) -> u32 {
        self.series.prec()
    }

    pub fn b(&self, eta: &Ball) -> Result<Ball> {
        self.series.eval_real(&eta.exp())?.ln()
    }

    pub fn b_prime(&self, eta: &Ball) -> Result<Ball> {
        let [s0, s1, _] = weighted_sums(&self.series, eta)?;
        s1.div_ref(&s0)
    }

    /// `S_2/S_0 - (S_1/S_0)^2`, the variance of the index under weights
    /// `a_k r^k`.
    pub fn b_second(&self, eta: &Ball) -> Result<Ball> {
        let [s0, s1, s2] = weighted_sums(&self.series, eta)?;
        let m1 = s1.div_ref(&s0)?;
        Ok(s2.div_ref(&s0)?.sub_ref(&m1.sqr()))
    }

    /// Smallest `k` for which `b'(eta) = k` has a root with `eta >= 0`:
    /// `max(floor(b'(0)) + 1, 1)`, using the upper end of the enclosure.
    pub fn k_min(&self) -> Result<usize> {
        let bp = self.b_prime(&Ball::zero(self.prec()))?;
        let f = bp.upper().floor().to_integer().and_then(|i| i.to_i64()).unwrap_or(i64::MAX);
        Ok((f + 1).max(1) as usize)
    }
}

/// Root of `b'(eta) = k`.
#[derive(Clone, Debug)]
pub struct SaddleSolve {
    pub k: usize,
    pub eta: Ball,
    pub k_min: usize,
}

pub fn saddle_eta(ls: &LogSeries, k: usize, tol: f64) -> Result<SaddleSolve> {
    let k_min = ls.k_min()?;
    if k < k_min {
        return Err(Error::BelowThreshold { k: k as i64, k_min: k_min as i64 });
    }
    let prec = ls.prec().max(64);
    let target = Ball::from_i64(k as i64, prec);
    let g = |eta: &Ball| ls.b_prime(eta);
    let mut hi = Float::with_val(prec, 1);
    while !g(&Ball::exact(hi.clone()))?.gt(&target) {
        // small steps keep the bracket inside the table's reach
        let step = Float::with_val(prec, &hi / 4).max(&Float::with_val(prec, 1));
        hi += step;
        if hi > 1 << 20 {
            return Err(Error::Bracket { lo: 0.0, hi: hi.to_f64() });
        }
    }
    let eta = solve_monotone(g, &target, &Float::new(prec), &hi, tol)?;
    Ok(SaddleSolve { k, eta, k_min })
}

/// Power-of-two radii near the saddle point for every `k` in `k_range`;
/// indices below the threshold keep the unit radius. Only the rounded
/// exponent is used, so the sums are truncated at `2^-64`.
pub fn saddle_scaling(ls: &LogSeries, k_range: (usize, usize)) -> Result<Vec<ScaleRecord>> {
    let ls = &ls.clone().with_tol_bits(64);
    let k_min = ls.k_min()?;
    (k_range.0..=k_range.1)
        .map(|k| {
            if k < k_min {
                Ok(ScaleRecord::unit(k))
            } else {
                Ok(ScaleRecord::from_eta(k, saddle_eta(ls, k, 1e-6)?.eta.to_f64()))
            }
        })
        .collect()
}

/// Tensor trapezoid settings on `[-pi, pi]^nu`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubatureConfig {
    pub nu: usize,
    /// Nodes per axis, a power of two.
    pub nodes_per_axis: usize,
    /// Largest admissible total node count.
    pub node_budget: u64,
    /// `sigma = c_sigma k^{-1/3}` for the split into a central box and the rest.
    pub c_sigma: f64,
}

impl CubatureConfig {
    pub fn new(nu: usize, nodes_per_axis: usize) -> CubatureConfig {
        CubatureConfig { nu, nodes_per_axis, node_budget: 1 << 24, c_sigma: 1.0 }
    }

    fn validated(&self) -> Result<()> {
        if self.nu == 0 || self.nu > 3 {
            return Err(Error::Invalid(format!("cubature dimension must be 1..=3, got {}", self.nu)));
        }
        if self.nodes_per_axis < 4 || !self.nodes_per_axis.is_power_of_two() {
            return Err(Error::Invalid(format!("nodes per axis must be a power of two >= 4, got {}", self.nodes_per_axis)));
        }
        let total = (self.nodes_per_axis as u128).pow(self.nu as u32);
        if total > u128::from(self.node_budget) {
            return Err(Error::Budget { count: total, budget: u128::from(self.node_budget) });
        }
        Ok(())
    }
}

/// A cubature value with the difference to the half-resolution rule as
/// error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub nodes: u64,
}

impl Estimate {
    /// Sign when `|value| > error`.
    pub fn sign(&self) -> SignTag {
        if self.value.abs() <= self.error || !self.value.is_finite() {
            SignTag::Undetermined
        } else if self.value > 0.0 {
            SignTag::Positive
        } else {
            SignTag::Negative
        }
    }
}

fn node_angle(i: usize, n: usize) -> f64 {
    let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
    if t > std::f64::consts::PI {
        t - 2.0 * std::f64::consts::PI
    } else {
        t
    }
}

/// `e^{-i k t} f(r e^{i t}) / f(r)` at each node.
fn axis_values(ls: &LogSeries, k: usize, eta: &Ball, n: usize) -> Result<Vec<(f64, f64)>> {
    let prec = ls.prec().max(64);
    let r = eta.set_prec(prec).exp();
    let fr = ls.series.eval_real(&r)?;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let t = Ball::pi(prec).mul_rational(&Rational::from((2 * i as i64, n as i64)));
            let z = ComplexBall::from_polar(&r, &t);
            let fz = ls.series.eval(&z)?;
            let phase = ComplexBall::from_polar(&Ball::one(prec), &t.mul_i64(-(k as i64)));
            let v = fz.mul(&phase);
            Ok((v.re.div_ref(&fr)?.to_f64(), v.im.div_ref(&fr)?.to_f64()))
        })
        .collect()
}

/// Sums of the weighted integrand over the full grid, over the even
/// subgrid, and over the central box `max |t_j| <= sigma`.
struct GridSums {
    full: f64,
    even: f64,
    central: f64,
}

fn grid_sums(g: &[(f64, f64)], nu: usize, sigma: f64) -> GridSums {
    let n = g.len();
    let w: Vec<f64> = (0..n).map(|d| 4.0 * (std::f64::consts::PI * d as f64 / n as f64).sin().powi(2)).collect();
    let inside: Vec<bool> = (0..n).map(|i| node_angle(i, n).abs() <= sigma).collect();
    let wt = |a: usize, b: usize| w[(a + n - b) % n];
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let rows: Vec<GridSums> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut s = GridSums { full: 0.0, even: 0.0, central: 0.0 };
            let mut add = |v: f64, even: bool, central: bool| {
                s.full += v;
                if even {
                    s.even += v;
                }
                if central {
                    s.central += v;
                }
            };
            match nu {
                1 => add(g[i].0, i % 2 == 0, inside[i]),
                2 => {
                    for j in 0..n {
                        let v = cmul(g[i], g[j]).0 * wt(i, j);
                        add(v, i % 2 == 0 && j % 2 == 0, inside[i] && inside[j]);
                    }
                }
                _ => {
                    for j in 0..n {
                        let gij = cmul(g[i], g[j]);
                        let wij = wt(i, j);
                        for l in 0..n {
                            let v = cmul(gij, g[l]).0 * wij * wt(i, l) * wt(j, l);
                            add(v, i % 2 == 0 && j % 2 == 0 && l % 2 == 0, inside[i] && inside[j] && inside[l]);
                        }
                    }
                }
            }
            s
        })
        .collect();
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let scale = h.powi(nu as i32);
    let mut out = GridSums { full: 0.0, even: 0.0, central: 0.0 };
    for r in rows {
        out.full += r.full;
        out.even += r.even;
        out.central += r.central;
    }
    GridSums { full: out.full * scale, even: out.even * scale * 2f64.powi(nu as i32), central: out.central * scale }
}

fn check_k_fits(k: usize) -> Result<()> {
    if k > i64::MAX as usize / 4 {
        return Err(Error::Invalid("k too large".into()));
    }
    Ok(())
}

/// The normalised integral `I_k^nu(eta)`: the torus integral with
/// `f(r e^{it}) / f(r)` in place of `f(r e^{it})`.
pub fn i_k_nu(ls: &LogSeries, k: usize, eta: &Ball, cfg: &CubatureConfig) -> Result<Estimate> {
    cfg.validated()?;
    check_k_fits(k)?;
    let g = axis_values(ls, k, eta, cfg.nodes_per_axis)?;
    let s = grid_sums(&g, cfg.nu, -1.0);
    Ok(Estimate {
        value: s.full,
        error: (s.full - s.even).abs(),
        nodes: (cfg.nodes_per_axis as u64).pow(cfg.nu as u32),
    })
}

/// Both sides of the torus identity for one minor.
#[derive(Clone, Debug)]
pub struct Lemma1Check {
    pub k: usize,
    pub nu: usize,
    pub eta: f64,
    /// `A_k^nu nu! (2 pi)^nu r^{k nu}`.
    pub lhs: Ball,
    /// `f(r)^nu I_k^nu`.
    pub rhs: Estimate,
    pub minor_sign: Sign,
    pub integral_sign: SignTag,
    /// `|lhs - rhs| / |lhs|`, or `|lhs - rhs|` when the minor is zero.
    pub rel_residual: f64,
    /// Both signs resolved and equal.
    pub signs_agree: bool,
}

impl Lemma1Check {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "nu": self.nu,
            "eta": self.eta,
            "lhs": {"mid": self.lhs.mid_decimal(), "rad": self.lhs.rad_decimal()},
            "rhs": {"value": self.rhs.value, "error": self.rhs.error, "nodes": self.rhs.nodes},
            "minor_sign": self.minor_sign.tag.as_str(),
            "integral_sign": self.integral_sign.as_str(),
            "residual": self.rel_residual,
            "signs_agree": self.signs_agree,
        })
    }
}

pub fn lemma1_check(seq: &SequenceWindow, k: usize, eta: &Ball, cfg: &CubatureConfig) -> Result<Lemma1Check> {
    cfg.validated()?;
    let nu = cfg.nu;
    let prec = seq.prec().max(128);
    let ls = LogSeries::from_window(seq, prec)?;
    let minor = toeplitz_minor(seq, k, nu)?;
    let minor_sign = minor.sign();
    let r = eta.set_prec(prec).exp();
    let mut lhs = minor.to_ball(prec).mul_ref(&Ball::pi(prec).mul_2exp(1).pow_u(nu as u32));
    for i in 2..=nu {
        lhs = lhs.mul_i64(i as i64);
    }
    lhs = lhs.mul_ref(&r.pow_u((k * nu) as u32));
    let fr = ls.series.eval_real(&r)?.pow_u(nu as u32).to_f64();
    let est = i_k_nu(&ls, k, eta, cfg)?;
    let rhs = Estimate { value: est.value * fr, error: est.error * fr, nodes: est.nodes };
    let l = lhs.to_f64();
    let diff = (l - rhs.value).abs();
    let rel_residual = if matches!(minor, Real::Exact(ref q) if *q == 0) { diff } else { diff / l.abs() };
    let integral_sign = est.sign();
    let signs_agree = minor_sign.tag.is_resolved() && integral_sign == minor_sign.tag;
    Ok(Lemma1Check { k, nu, eta: eta.to_f64(), lhs, rhs, minor_sign, integral_sign, rel_residual, signs_agree })
}

/// The normalised integral split at the box `max |t_j| <= sigma`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JSplit {
    pub sigma: f64,
    pub central: f64,
    pub outer: f64,
    pub total: Estimate,
}

pub fn j_split(ls: &LogSeries, k: usize, eta: &Ball, cfg: &CubatureConfig) -> Result<JSplit> {
    cfg.validated()?;
    if k == 0 {
        return Err(Error::Invalid("the split needs k >= 1".into()));
    }
    let sigma = cfg.c_sigma * (k as f64).powf(-1.0 / 3.0);
    if !(sigma > 0.0 && sigma < std::f64::consts::PI) {
        return Err(Error::Invalid(format!("sigma = {sigma} must lie in (0, pi)")));
    }
    let g = axis_values(ls, k, eta, cfg.nodes_per_axis)?;
    let s = grid_sums(&g, cfg.nu, sigma);
    Ok(JSplit {
        sigma,
        central: s.central,
        outer: s.full - s.central,
        total: Estimate {
            value: s.full,
            error: (s.full - s.even).abs(),
            nodes: (cfg.nodes_per_axis as u64).pow(cfg.nu as u32),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Real;

    fn exp_ls() -> LogSeries {
        LogSeries::from_window(&SequenceWindow::exp_series(&Rational::from(1), 300), 128).unwrap()
    }

    #[test]
    fn exp_derivatives() {
        let ls = exp_ls();
        let eta = Ball::from_f64(0.5, 128);
        let e = eta.exp().to_f64();
        assert!((ls.b(&eta).unwrap().to_f64() - e).abs() < 1e-12);
        assert!((ls.b_prime(&eta).unwrap().to_f64() - e).abs() < 1e-12);
        assert!((ls.b_second(&eta).unwrap().to_f64() - e).abs() < 1e-12);
    }

    #[test]
    fn exp_saddle_and_threshold() {
        let ls = exp_ls();
        assert_eq!(ls.k_min().unwrap(), 2);
        let s = saddle_eta(&ls, 10, 1e-10).unwrap();
        assert!((s.eta.to_f64() - 10f64.ln()).abs() < 1e-9);
        match saddle_eta(&ls, 0, 1e-10) {
            Err(Error::BelowThreshold { k_min, .. }) => assert_eq!(k_min, 2),
            other => panic!("{other:?}"),
        }
        let sc = saddle_scaling(&ls, (0, 20)).unwrap();
        assert_eq!(sc[1].exp2, 0);
        assert_eq!(sc[16].exp2, 4);
    }

    #[test]
    fn normalised_integrals_of_exp() {
        let ls = exp_ls();
        let zero = Ball::zero(128);
        let e = std::f64::consts::E;
        let pi = std::f64::consts::PI;
        let i1 = i_k_nu(&ls, 0, &zero, &CubatureConfig::new(1, 32)).unwrap();
        assert!((i1.value - 2.0 * pi / e).abs() < 1e-12);
        let i2 = i_k_nu(&ls, 0, &zero, &CubatureConfig::new(2, 32)).unwrap();
        assert!((i2.value - 8.0 * pi * pi / (e * e)).abs() < 1e-10);
    }

    #[test]
    fn torus_identity_on_exp_and_failing_quadratic() {
        let w = SequenceWindow::exp_series(&Rational::from(1), 60);
        let zero = Ball::zero(128);
        let c = lemma1_check(&w, 2, &zero, &CubatureConfig::new(2, 32)).unwrap();
        assert!(c.rel_residual < 1e-10, "{}", c.rel_residual);
        assert!(c.signs_agree);
        let q = SequenceWindow::polynomial(&[Rational::from(1), Rational::from((4, 5)), Rational::from(1)]).unwrap();
        let c = lemma1_check(&q, 1, &zero, &CubatureConfig::new(2, 16)).unwrap();
        assert_eq!(c.minor_sign.tag, SignTag::Negative);
        assert!(matches!(toeplitz_minor(&q, 1, 2).unwrap(), Real::Exact(v) if v == (-9, 25)));
        assert!(c.signs_agree);
    }

    #[test]
    fn budget_and_dimension_guard() {
        let ls = exp_ls();
        let zero = Ball::zero(128);
        assert!(i_k_nu(&ls, 0, &zero, &CubatureConfig::new(4, 8)).is_err());
        let mut cfg = CubatureConfig::new(3, 512);
        cfg.node_budget = 1 << 20;
        assert!(matches!(i_k_nu(&ls, 0, &zero, &cfg), Err(Error::Budget { .. })));
        assert!(i_k_nu(&ls, 0, &zero, &CubatureConfig::new(1, 12)).is_err());
    }

    #[test]
    fn split_sums_to_total() {
        let ls = exp_ls();
        let s = saddle_eta(&ls, 50, 1e-10).unwrap();
        let cfg = CubatureConfig::new(2, 128);
        let j = j_split(&ls, 50, &s.eta, &cfg).unwrap();
        assert!((j.central + j.outer - j.total.value).abs() < 1e-12 * j.total.value.abs().max(1.0));
        assert!(j.central > 0.0 && j.outer.abs() < j.central);
        let mut wide = cfg;
        wide.c_sigma = 20.0;
        assert!(j_split(&ls, 50, &s.eta, &wide).is_err());
    }
}
