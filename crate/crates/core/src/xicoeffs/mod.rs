//! Maclaurin coefficients of `xi1(z) = xi(sqrt(z) + 1/2)`.
//!
//! `b_k = 8 * 4^k / (2k)! * int_0^inf t^{2k} Phi(t) dt` with the theta-type
//! kernel
//! `Phi(t) = sum_{n>=1} (2 pi^2 n^4 e^{9t} - 3 pi n^2 e^{5t}) exp(-pi n^2 e^{4t})`.
//! All moments share one set of kernel evaluations on nested
//! doubly-exponential nodes.

use std::path::Path;

use rayon::prelude::*;
use rug::float::Round;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::ball::RAD_PREC;
use crate::numerics::quad::{DeNode, DeRule};
use crate::numerics::{Ball, ComplexBall, PrecisionPolicy};

pub mod series;
pub mod zeta;

pub use series::{PowerSeries, TailModel};
pub use zeta::{bernoulli_numbers, gamma_real, xi_half_direct, zeta_real};

/// Version tag written into coefficient cache files.
pub const CACHE_FORMAT_VERSION: u64 = 1;

/// Deepest node level tried by the moment integrator.
const MAX_LEVEL: u32 = 12;

/// Truncation parameters for the kernel series and the `t` integral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiConfig {
    /// Largest `n` summed in the kernel series.
    pub n_cap: u32,
    /// Relative cutoff for the kernel series. The working precision's own
    /// cutoff applies when it is smaller.
    pub term_tol: f64,
    /// Upper end of the `t` integral; the remainder is bounded analytically.
    pub t_max: f64,
}

impl Default for PhiConfig {
    fn default() -> Self {
        PhiConfig { n_cap: 256, term_tol: 1e-20, t_max: 4.0 }
    }
}

impl PhiConfig {
    pub fn validated(self) -> Result<Self> {
        if self.n_cap == 0 {
            return Err(Error::Invalid("n_cap must be at least 1".into()));
        }
        if !(self.term_tol > 0.0) {
            return Err(Error::Invalid("term_tol must be positive".into()));
        }
        // exp(-pi e^{4t}) leaves the exponent range shortly after t = 4.5
        if !(self.t_max >= 1.0 && self.t_max <= 4.5) {
            return Err(Error::Invalid(format!("t_max must lie in [1, 4.5], got {}", self.t_max)));
        }
        Ok(self)
    }
}

fn add_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_PREC, a + b, Round::Up).0
}

/// The kernel `Phi(t)` for `t >= 0`, including a bound on the series tail.
///
/// Consecutive terms are dominated by `B_n = 2 pi^2 n^4 e^{9t} q^{n^2}`,
/// `q = exp(-pi e^{4t})`, whose ratio is below `16 e^{-3 pi} < 0.0013`; the
/// tail after `n = N` is therefore at most `2 B_{N+1}`.
pub fn phi(t: &Ball, cfg: &PhiConfig) -> Result<Ball> {
    if t.lower() < 0 {
        return Err(Error::Domain(format!("phi needs t >= 0, got {}", t.to_f64())));
    }
    let p = t.prec();
    let pi = Ball::pi(p);
    let e1 = t.exp();
    let e4 = e1.pow_u(4);
    let e5 = e4.mul_ref(&e1);
    let e9 = e5.mul_ref(&e4);
    let pe4 = pi.mul_ref(&e4);
    let q = pe4.neg().exp();
    let q2 = q.sqr();
    let cutoff = {
        let by_prec = Float::with_val(RAD_PREC, 1) >> (p + 8);
        let by_cfg = Float::with_val(RAD_PREC, cfg.term_tol);
        if by_prec < by_cfg { by_prec } else { by_cfg }
    };
    let mut sum = Ball::zero(p);
    let mut qn = q.clone(); // q^{n^2}
    let mut step = q.mul_ref(&q2); // q^{2n+1}
    let mut n: u64 = 1;
    loop {
        let n2 = Ball::from_i64((n * n) as i64, p);
        let inner = n2.mul_ref(&pe4).mul_2exp(1).sub_ref(&Ball::from_i64(3, p));
        let term = pi.mul_ref(&n2).mul_ref(&e5).mul_ref(&inner).mul_ref(&qn);
        sum = sum.add_ref(&term);
        qn = qn.mul_ref(&step);
        step = step.mul_ref(&q2);
        let small = term.mag() <= Float::with_val(RAD_PREC, &cutoff * &sum.mig());
        if small || n >= u64::from(cfg.n_cap) {
            break;
        }
        n += 1;
    }
    // 2 B_{n+1}
    let m = Ball::from_i64((n + 1) as i64, p);
    let b_next = pi.sqr().mul_2exp(2).mul_ref(&m.pow_u(4)).mul_ref(&e9).mul_ref(&qn);
    Ok(sum.add_error(&b_next.mag()))
}

/// Bound on `int_T^inf t^{2k} Phi(t) dt`.
///
/// With `Phi <= g = 4 pi^2 e^{9t} exp(-pi e^{4t})`, the logarithmic
/// derivative of `t^{2k} g(t)` is at most `-lambda` on `[T, inf)`, so the
/// integral is below `T^{2k} g(T) / lambda`.
fn moment_tail(k: usize, t_max: f64) -> Result<Float> {
    let p = 64;
    let t = Ball::from_f64(t_max, p);
    let pi = Ball::pi(p);
    let e4 = t.mul_2exp(2).exp();
    let lambda = pi.mul_ref(&e4).mul_2exp(2).sub_ref(&Ball::from_i64(9, p)).sub_ref(&Ball::from_f64(2.0 * k as f64 / t_max, p));
    if !lambda.is_positive() {
        return Err(Error::Invalid(format!("t_max = {t_max} is too small for k = {k}")));
    }
    let g = pi.sqr().mul_2exp(2).mul_ref(&t.mul_i64(9).exp()).mul_ref(&pi.mul_ref(&e4).neg().exp());
    let v = t.pow_u(2 * k as u32).mul_ref(&g).div_ref(&lambda)?;
    Ok(v.mag())
}

/// Sum of `w * t^{2k} * Phi(t)` over `nodes` for `k = k_lo..=k_hi`.
fn node_moments(nodes: &[DeNode], k_lo: usize, k_hi: usize, cfg: &PhiConfig) -> Result<Vec<Ball>> {
    const CHUNK: usize = 32;
    let count = k_hi - k_lo + 1;
    let prec = nodes.first().map(|n| n.w.prec()).unwrap_or(64);
    let parts: Vec<Result<Vec<Ball>>> = nodes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![Ball::zero(prec); count];
            for node in chunk {
                let t = Ball::exact(node.t.clone());
                let base = node.w.mul_ref(&phi(&t, cfg)?);
                let t2 = t.sqr();
                let mut term = base.mul_ref(&t2.pow_u(k_lo as u32));
                for slot in acc.iter_mut() {
                    *slot = slot.add_ref(&term);
                    term = term.mul_ref(&t2);
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = vec![Ball::zero(prec); count];
    for part in parts {
        for (slot, v) in total.iter_mut().zip(part?) {
            *slot = slot.add_ref(&v);
        }
    }
    Ok(total)
}

/// Moments `int_0^inf t^{2k} Phi(t) dt` for `k_lo..=k_hi` at `prec` bits.
///
/// Returns the enclosures and the node level reached. The discretization
/// error is the difference between consecutive levels.
fn moment_integrals(k_lo: usize, k_hi: usize, cfg: &PhiConfig, prec: u32) -> Result<(Vec<Ball>, u32)> {
    let wp = prec + 64;
    let rule = DeRule::finite(Float::new(wp), Float::with_val(wp, cfg.t_max), wp);
    let tails: Vec<Float> = (k_lo..=k_hi).map(|k| moment_tail(k, cfg.t_max)).collect::<Result<_>>()?;
    let mut raw = node_moments(&rule.level_nodes(0), k_lo, k_hi, cfg)?;
    let mut prev: Vec<Ball> = raw.clone();
    let mut best: Vec<Option<Ball>> = vec![None; raw.len()];
    let target_shift = prec as i32 + 4;
    let mut level = 0;
    while level < MAX_LEVEL {
        level += 1;
        let fresh = node_moments(&rule.level_nodes(level), k_lo, k_hi, cfg)?;
        for (r, f) in raw.iter_mut().zip(fresh) {
            *r = r.add_ref(&f);
        }
        let (lo_end, hi_end) = rule.end_nodes(level);
        let ends = node_moments(&[lo_end, hi_end], k_lo, k_hi, cfg)?;
        let mut done = level >= 3;
        for i in 0..raw.len() {
            let cur = raw[i].mul_2exp(-(level as i32));
            let d = Float::with_val(wp, cur.mid() - prev[i].mid());
            let mut err = Float::with_val_round(RAD_PREC, &*d.as_abs(), Round::Up).0;
            err = add_up(&err, &ends[i].mul_2exp(-(level as i32)).mag());
            err = add_up(&err, &tails[i]);
            let cand = cur.add_error(&err);
            let better = best[i].as_ref().is_none_or(|b| cand.rad() < b.rad());
            if better {
                best[i] = Some(cand.clone());
            }
            let b = best[i].as_ref().expect("set above");
            let rel_ok = !b.mid().is_zero()
                && b.rad().get_exp().unwrap_or(i32::MIN) < b.mid().get_exp().unwrap_or(i32::MIN) - target_shift;
            done &= rel_ok;
            prev[i] = cur;
        }
        if done {
            break;
        }
    }
    Ok((best.into_iter().map(|b| b.expect("level >= 1").set_prec(prec)).collect(), level))
}

/// `8 * 4^k / (2k)!`
fn moment_scale(k: usize) -> Rational {
    let mut f = Integer::from(1);
    for i in 2..=(2 * k as u64) {
        f *= i;
    }
    Rational::from((Integer::from(8) << (2 * k as u32), f))
}

fn coeffs_at(k_lo: usize, k_hi: usize, cfg: &PhiConfig, prec: u32) -> Result<(Vec<Ball>, u32)> {
    let (moments, level) = moment_integrals(k_lo, k_hi, cfg, prec)?;
    let mut scale = moment_scale(k_lo);
    let mut out = Vec::with_capacity(moments.len());
    for (i, m) in moments.iter().enumerate() {
        let k = (k_lo + i) as u64;
        if i > 0 {
            scale *= Rational::from((4, (2 * k - 1) * (2 * k)));
        }
        out.push(m.mul_rational(&scale));
    }
    Ok((out, level))
}

/// A single coefficient `b_k`, escalating precision until it is certified
/// positive. An uncertified result at the top of the ladder is returned as
/// computed (its radius exceeds its midpoint).
pub fn xi1_coeff(k: usize, cfg: &PhiConfig, policy: &PrecisionPolicy) -> Result<Ball> {
    let cfg = cfg.clone().validated()?;
    let mut last = None;
    for bits in policy.ladder() {
        let (mut v, _) = coeffs_at(k, k, &cfg, bits)?;
        let b = v.remove(0);
        if b.is_positive() {
            return Ok(b);
        }
        last = Some(b);
    }
    Ok(last.expect("ladder is nonempty"))
}

/// How a table was produced.
#[derive(Clone, Debug, PartialEq)]
pub struct TableMeta {
    pub phi_config: PhiConfig,
    pub prec_bits: u32,
    pub policy: PrecisionPolicy,
    /// Node level reached by the moment integrator (0 when loaded from a cache).
    pub level: u32,
    /// Indices whose coefficient could not be certified positive.
    pub uncertified: Vec<usize>,
}

/// Enclosures of `b_0 ..= b_{k_max}`; immutable once built.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    entries: Vec<Ball>,
    meta: TableMeta,
}

impl PartialEq for CoeffTable {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.meta.prec_bits == other.meta.prec_bits
    }
}

impl CoeffTable {
    /// Computes `b_0 ..= b_{k_max}`, climbing the precision ladder until every
    /// entry is certified positive with a relative radius near `2^-bits`.
    pub fn generate(k_max: usize, cfg: &PhiConfig, policy: &PrecisionPolicy) -> Result<CoeffTable> {
        let cfg = cfg.clone().validated()?;
        let policy = (*policy).validated()?;
        let ladder = policy.ladder();
        let mut out = None;
        for &bits in &ladder {
            let (entries, level) = coeffs_at(0, k_max, &cfg, bits)?;
            let uncertified: Vec<usize> =
                entries.iter().enumerate().filter(|(_, b)| !b.is_positive()).map(|(k, _)| k).collect();
            let ok = uncertified.is_empty();
            out = Some(CoeffTable {
                entries,
                meta: TableMeta { phi_config: cfg.clone(), prec_bits: bits, policy, level, uncertified },
            });
            if ok {
                break;
            }
        }
        Ok(out.expect("ladder is nonempty"))
    }

    /// Builds a table from given enclosures (used by the cache loader).
    pub fn from_entries(entries: Vec<Ball>, phi_config: PhiConfig, prec_bits: u32) -> CoeffTable {
        let uncertified = entries.iter().enumerate().filter(|(_, b)| !b.is_positive()).map(|(k, _)| k).collect();
        CoeffTable {
            entries,
            meta: TableMeta { phi_config, prec_bits, policy: PrecisionPolicy::fixed(prec_bits), level: 0, uncertified },
        }
    }

    pub fn entries(&self) -> &[Ball] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> Option<&Ball> {
        self.entries.get(k)
    }

    pub fn k_max(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn prec_bits(&self) -> u32 {
        self.meta.prec_bits
    }

    pub fn meta(&self) -> &TableMeta {
        &self.meta
    }

    pub fn all_positive(&self) -> bool {
        self.meta.uncertified.is_empty()
    }

    /// The series `sum b_k z^k` with the log-concave tail model and a
    /// relative cutoff matching the table precision.
    pub fn series(&self) -> Result<PowerSeries> {
        Ok(PowerSeries::new(self.entries.clone(), TailModel::LogConcave, 1.0)?.with_tol_bits(self.meta.prec_bits))
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .enumerate()
            .map(|(k, b)| json!({"k": k, "mid": b.mid_decimal(), "rad": b.rad_decimal()}))
            .collect();
        json!({
            "format_version": CACHE_FORMAT_VERSION,
            "phi_config": self.meta.phi_config,
            "precision": self.meta.prec_bits,
            "entries": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<CoeffTable> {
        let bad = |field: &str, reason: &str| Error::Cache { field: field.into(), reason: reason.into() };
        let version = v.get("format_version").and_then(Value::as_u64).ok_or_else(|| bad("format_version", "missing or not an integer"))?;
        if version != CACHE_FORMAT_VERSION {
            return Err(bad("format_version", &format!("unsupported version {version}")));
        }
        let phi_config: PhiConfig = serde_json::from_value(v.get("phi_config").cloned().ok_or_else(|| bad("phi_config", "missing"))?)
            .map_err(|e| bad("phi_config", &e.to_string()))?;
        let precision = v.get("precision").and_then(Value::as_u64).ok_or_else(|| bad("precision", "missing or not an integer"))?;
        if !(2..=1 << 24).contains(&precision) {
            return Err(bad("precision", "out of range"));
        }
        let prec = precision as u32;
        let list = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("entries", "missing or not an array"))?;
        if list.is_empty() {
            return Err(bad("entries", "empty"));
        }
        let mut entries = Vec::with_capacity(list.len());
        for (i, e) in list.iter().enumerate() {
            let field = |name: &str| format!("entries[{i}].{name}");
            let k = e.get("k").and_then(Value::as_u64).ok_or_else(|| bad(&field("k"), "missing or not an integer"))?;
            if k != i as u64 {
                return Err(bad(&field("k"), &format!("expected {i}, found {k}")));
            }
            let mid = e.get("mid").and_then(Value::as_str).ok_or_else(|| bad(&field("mid"), "missing or not a string"))?;
            let rad = e.get("rad").and_then(Value::as_str).ok_or_else(|| bad(&field("rad"), "missing or not a string"))?;
            let b = Ball::from_decimal(mid, rad, prec).map_err(|err| bad(&field("mid/rad"), &err.to_string()))?;
            entries.push(b);
        }
        Ok(CoeffTable::from_entries(entries, phi_config, prec))
    }

    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json())?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<CoeffTable> {
        let text = std::fs::read_to_string(path)?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Cache { field: "<document>".into(), reason: e.to_string() })?;
        CoeffTable::from_json(&v)
    }
}

/// `xi1` as a power series backed by a coefficient table.
#[derive(Clone, Debug)]
pub struct XiSeries {
    table: CoeffTable,
    series: PowerSeries,
}

impl XiSeries {
    pub fn new(table: CoeffTable) -> Result<XiSeries> {
        if !table.all_positive() {
            return Err(Error::Invalid("coefficient table has uncertified entries".into()));
        }
        let series = table.series()?;
        Ok(XiSeries { table, series })
    }

    pub fn table(&self) -> &CoeffTable {
        &self.table
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }
}

/// `xi1(z)` from the Taylor series, with the truncation bound in the radius.
pub fn xi1_eval(z: &ComplexBall, s: &XiSeries) -> Result<ComplexBall> {
    s.series.eval(z)
}

/// One row of the asymptotic diagnostic.
#[derive(Clone, Debug, Serialize)]
pub struct AsymRow {
    pub r: f64,
    pub eta: f64,
    pub theta: f64,
    /// `log |xi1(r e^{i theta})|`.
    pub log_abs: f64,
    /// The three leading terms of the large-`r` expansion at `theta`.
    pub leading: f64,
    /// `(log_abs - leading) / log r`.
    pub remainder_over_log_r: f64,
    /// `8 b'(eta) / (eta e^{eta/2})` at `r = e^eta` on the positive axis.
    pub log_derivative_ratio: f64,
}

/// Leading terms of `log |xi1(r e^{i theta})|`:
/// `sqrt(r)/4 (log r cos(theta/2) - theta sin(theta/2)) - sqrt(r)/2 (log 2 + 1 + log pi) cos(theta/2)`.
pub fn asym_leading(r: &Ball, theta: &Ball) -> Result<Ball> {
    let p = r.prec();
    let sr = r.sqrt()?;
    let lr = r.ln()?;
    let half = theta.mul_2exp(-1);
    let (c, s) = (half.cos(), half.sin());
    let a = lr.mul_ref(&c).sub_ref(&theta.mul_ref(&s)).mul_ref(&sr).mul_2exp(-2);
    let k = Ball::ln2(p).add_ref(&Ball::one(p)).add_ref(&Ball::pi(p).ln()?);
    Ok(a.sub_ref(&sr.mul_ref(&k).mul_ref(&c).mul_2exp(-1)))
}

/// Tabulates the large-`r` behaviour of `xi1` on `r_grid` at angle `theta`.
pub fn asym_diag(r_grid: &[f64], s: &XiSeries, theta: f64) -> Result<Vec<AsymRow>> {
    let p = s.table.prec_bits();
    let th = Ball::from_f64(theta, p);
    r_grid
        .iter()
        .map(|&r| {
            if !(r > 1.0) {
                return Err(Error::Invalid(format!("asym_diag needs r > 1, got {r}")));
            }
            let rb = Ball::from_f64(r, p);
            let z = ComplexBall::from_polar(&rb, &th);
            let log_abs = xi1_eval(&z, s)?.abs()?.ln()?;
            let leading = asym_leading(&rb, &th)?;
            let lr = rb.ln()?;
            let rem = log_abs.sub_ref(&leading).div_ref(&lr)?;
            let m = s.series.moments(&rb, 1)?;
            let bp = m[1].div_ref(&m[0])?;
            let ratio = bp.mul_i64(8).div_ref(&lr.mul_ref(&lr.mul_2exp(-1).exp()))?;
            Ok(AsymRow {
                r,
                eta: lr.to_f64(),
                theta,
                log_abs: log_abs.to_f64(),
                leading: leading.to_f64(),
                remainder_over_log_r: rem.to_f64(),
                log_derivative_ratio: ratio.to_f64(),
            })
        })
        .collect()
}
