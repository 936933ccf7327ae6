//! Toeplitz windows `(a_{k+j-l})` of coefficient sequences and their minors.
//!
//! Entries with negative index are zero. Past the stored prefix a polynomial
//! window continues with zeros, while a truncated series window refuses to
//! answer.

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::{real_det, PrecisionPolicy, Real, Sign, SignTag};
use crate::xicoeffs::CoeffTable;

mod enumerate;

pub use enumerate::{apf_scan, bruteforce_minors, default_bound, fekete_check, minor_count, tp_matrix, ApfResult, FeketeResult};

/// Where a coefficient window comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowSource {
    /// All coefficients are stored; beyond them the sequence is zero.
    Polynomial,
    /// A prefix of an infinite series; nothing is known past the end.
    TruncatedSeries,
}

/// A finite prefix `a_0 ..= a_M` of a coefficient sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceWindow {
    coeffs: Vec<Real>,
    source: WindowSource,
}

impl SequenceWindow {
    pub fn new(coeffs: Vec<Real>, source: WindowSource) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("a window needs at least one coefficient".into()));
        }
        Ok(SequenceWindow { coeffs, source })
    }

    pub fn polynomial(coeffs: &[Rational]) -> Result<Self> {
        Self::new(coeffs.iter().cloned().map(Real::Exact).collect(), WindowSource::Polynomial)
    }

    pub fn polynomial_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Real::from_i64(c)).collect(), WindowSource::Polynomial)
    }

    pub fn truncated(coeffs: Vec<Real>) -> Result<Self> {
        Self::new(coeffs, WindowSource::TruncatedSeries)
    }

    /// `a_j = c^j / j!` for `j <= last`, the window of `e^{cz}`.
    pub fn exp_series(c: &Rational, last: usize) -> Self {
        let mut out = Vec::with_capacity(last + 1);
        let mut v = Rational::from(1);
        for j in 0..=last {
            if j > 0 {
                v *= c;
                v /= j as u64;
            }
            out.push(Real::Exact(v.clone()));
        }
        SequenceWindow { coeffs: out, source: WindowSource::TruncatedSeries }
    }

    /// `a_j = q^j` for `j <= last`.
    pub fn geometric(q: &Rational, last: usize) -> Self {
        let mut out = Vec::with_capacity(last + 1);
        let mut v = Rational::from(1);
        for _ in 0..=last {
            out.push(Real::Exact(v.clone()));
            v *= q;
        }
        SequenceWindow { coeffs: out, source: WindowSource::TruncatedSeries }
    }

    /// The window `b_0 ..= b_{k_max}` of a coefficient table.
    pub fn from_table(t: &CoeffTable) -> Self {
        SequenceWindow { coeffs: t.entries().iter().cloned().map(Real::Approx).collect(), source: WindowSource::TruncatedSeries }
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn source(&self) -> WindowSource {
        self.source
    }

    /// Index of the last stored coefficient.
    pub fn last(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Real::is_exact)
    }

    /// Working precision of the ball entries (0 for exact windows).
    pub fn prec(&self) -> u32 {
        self.coeffs
            .iter()
            .filter_map(|c| match c {
                Real::Approx(b) => Some(b.prec()),
                Real::Exact(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// `a_i`, with zeros for negative `i` and past the end of a polynomial.
    pub fn get(&self, i: i64) -> Result<Real> {
        if i < 0 {
            return Ok(Real::zero());
        }
        let i = i as usize;
        match self.coeffs.get(i) {
            Some(v) => Ok(v.clone()),
            None if self.source == WindowSource::Polynomial => Ok(Real::zero()),
            None => Err(Error::OutOfEvidence { index: i, last: self.last() }),
        }
    }

    /// Fails unless `a_i` is known for every `i <= index`.
    pub fn require(&self, index: usize) -> Result<()> {
        if self.source == WindowSource::TruncatedSeries && index > self.last() {
            return Err(Error::OutOfEvidence { index, last: self.last() });
        }
        Ok(())
    }

    /// `a_j -> a_j 2^{e j}`; exact for both rational and ball entries.
    pub fn scaled_pow2(&self, e: i64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let s = e * j as i64;
                match c {
                    Real::Exact(q) => Real::Exact(shift_rational(q, s)),
                    Real::Approx(b) => Real::Approx(b.mul_2exp(s as i32)),
                }
            })
            .collect();
        SequenceWindow { coeffs, source: self.source }
    }

    /// `a_j -> a_j r^j` for rational `r`.
    pub fn scaled(&self, r: &Rational) -> Self {
        let mut p = Rational::from(1);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.mul_rational(&p));
            p *= r;
        }
        SequenceWindow { coeffs, source: self.source }
    }

    /// Prefix `a_0 ..= a_last` (same source tag).
    pub fn prefix(&self, last: usize) -> Self {
        let end = (last + 1).min(self.coeffs.len());
        SequenceWindow { coeffs: self.coeffs[..end].to_vec(), source: self.source }
    }
}

fn shift_rational(q: &Rational, s: i64) -> Rational {
    let p = Integer::from(1) << (s.unsigned_abs() as u32);
    if s >= 0 {
        q * Rational::from(p)
    } else {
        q / Rational::from(p)
    }
}

/// Default working precision for windows that carry no balls.
const EXACT_PREC: u32 = 128;

/// Determinant of `(a_{c - r})` over the given rows and columns. A row or
/// column of structural zeros gives an exact zero without elimination.
pub fn general_minor(seq: &SequenceWindow, rows: &[usize], cols: &[usize]) -> Result<Real> {
    if rows.len() != cols.len() || rows.is_empty() {
        return Err(Error::Invalid("a minor needs equally many (>= 1) rows and columns".into()));
    }
    let mut m = Vec::with_capacity(rows.len());
    for &r in rows {
        let mut row = Vec::with_capacity(cols.len());
        for &c in cols {
            row.push(seq.get(c as i64 - r as i64)?);
        }
        m.push(row);
    }
    det_with_zero_lines(&m, seq.prec().max(EXACT_PREC))
}

pub(crate) fn det_with_zero_lines(m: &[Vec<Real>], prec: u32) -> Result<Real> {
    let n = m.len();
    let zero_row = m.iter().any(|r| r.iter().all(Real::is_exact_zero));
    let zero_col = (0..n).any(|j| m.iter().all(|r| r[j].is_exact_zero()));
    if zero_row || zero_col {
        return Ok(Real::zero());
    }
    real_det(m, prec)
}

/// `A_k^nu = det(a_{k+j-l})`, `l, j = 0 .. nu-1`.
pub fn toeplitz_minor(seq: &SequenceWindow, k: usize, nu: usize) -> Result<Real> {
    if nu == 0 {
        return Err(Error::Invalid("minor order must be at least 1".into()));
    }
    seq.require(k + nu - 1)?;
    let rows: Vec<usize> = (0..nu).collect();
    let cols: Vec<usize> = (k..k + nu).collect();
    general_minor(seq, &rows, &cols)
}

/// Supplies the same window at a higher working precision.
pub trait Refine: Sync {
    fn at_bits(&self, bits: u32) -> Result<SequenceWindow>;
}

impl<F> Refine for F
where
    F: Fn(u32) -> Result<SequenceWindow> + Sync,
{
    fn at_bits(&self, bits: u32) -> Result<SequenceWindow> {
        self(bits)
    }
}

/// Per-`k` rescaling `a_j -> a_j 2^{e j}` applied before evaluating `A_k^nu`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleRecord {
    pub k: usize,
    /// Saddle parameter the exponent was derived from, when there was one.
    pub eta: Option<f64>,
    /// Exponent `e`: the applied radius is `r = 2^e`.
    pub exp2: i64,
}

impl ScaleRecord {
    pub fn unit(k: usize) -> Self {
        ScaleRecord { k, eta: None, exp2: 0 }
    }

    /// Power of two closest to `e^eta`.
    pub fn from_eta(k: usize, eta: f64) -> Self {
        ScaleRecord { k, eta: Some(eta), exp2: (eta / std::f64::consts::LN_2).round() as i64 }
    }
}

/// One evaluated minor.
#[derive(Clone, Debug)]
pub struct MinorEntry {
    pub k: usize,
    pub nu: usize,
    /// `A_k^nu` of the unscaled sequence.
    pub value: Real,
    pub sign: Sign,
}

/// Certified signs of `A_k^nu` over a rectangular `(k, nu)` grid.
#[derive(Clone, Debug)]
pub struct MinorReport {
    pub k_range: (usize, usize),
    pub nu_range: (usize, usize),
    pub scaling: Vec<ScaleRecord>,
    /// Grid entries ordered by `k`, then `nu`.
    pub entries: Vec<MinorEntry>,
}

fn real_json(v: &Real) -> (String, String) {
    match v {
        Real::Exact(q) => (q.to_string(), "0".into()),
        Real::Approx(b) => (b.mid_decimal(), b.rad_decimal()),
    }
}

impl MinorReport {
    pub fn get(&self, k: usize, nu: usize) -> Option<&MinorEntry> {
        self.entries.iter().find(|e| e.k == k && e.nu == nu)
    }

    pub fn count(&self, tag: SignTag) -> usize {
        self.entries.iter().filter(|e| e.sign.tag == tag).count()
    }

    /// Largest precision used by any entry.
    pub fn max_bits(&self) -> u32 {
        self.entries.iter().map(|e| e.sign.at_bits).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let scaling: Vec<Value> = self
            .scaling
            .iter()
            .map(|s| {
                let r = shift_rational(&Rational::from(1), s.exp2);
                json!({"k": s.k, "eta": s.eta, "r_mid": r.to_string(), "r_rad": "0"})
            })
            .collect();
        let grid: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let (mid, rad) = real_json(&e.value);
                json!({"k": e.k, "nu": e.nu, "sign": e.sign.tag.as_str(), "mid": mid, "rad": rad, "bits": e.sign.at_bits})
            })
            .collect();
        json!({
            "params": {"k_range": [self.k_range.0, self.k_range.1], "nu_range": [self.nu_range.0, self.nu_range.1]},
            "applied_scaling": scaling,
            "grid": grid,
        })
    }
}

/// Settings for minor grids.
#[derive(Clone, Debug)]
#[derive(Default)]
pub struct ScanConfig {
    pub policy: PrecisionPolicy,
    /// Scaling per `k`; missing entries mean no scaling.
    pub scaling: Vec<ScaleRecord>,
}


impl ScanConfig {
    fn exp_for(&self, k: usize) -> i64 {
        self.scaling.iter().find(|s| s.k == k).map_or(0, |s| s.exp2)
    }
}

fn scaled_minor(seq: &SequenceWindow, k: usize, nu: usize, e: i64) -> Result<MinorEntry> {
    let w = if e == 0 { seq.clone() } else { seq.prefix(k + nu - 1).scaled_pow2(e) };
    let v = toeplitz_minor(&w, k, nu)?;
    // undo the factor 2^{e nu k}
    let back = -(e * (nu * k) as i64);
    let value = match v {
        Real::Exact(q) => Real::Exact(shift_rational(&q, back)),
        Real::Approx(b) => Real::Approx(b.mul_2exp(back as i32)),
    };
    let sign = value.sign();
    Ok(MinorEntry { k, nu, value, sign })
}

/// Evaluates `A_k^nu` for `k` in `k_range` and `nu` in `nu_range`
/// (both inclusive). Entries whose sign stays undetermined are recomputed
/// from `refine` along the precision ladder.
pub fn minor_report(
    seq: &SequenceWindow,
    k_range: (usize, usize),
    nu_range: (usize, usize),
    cfg: &ScanConfig,
    refine: Option<&dyn Refine>,
) -> Result<MinorReport> {
    if k_range.0 > k_range.1 || nu_range.0 == 0 || nu_range.0 > nu_range.1 {
        return Err(Error::Invalid(format!("empty or invalid grid k {k_range:?}, nu {nu_range:?}")));
    }
    seq.require(k_range.1 + nu_range.1 - 1)?;
    let cells: Vec<(usize, usize)> =
        (k_range.0..=k_range.1).flat_map(|k| (nu_range.0..=nu_range.1).map(move |nu| (k, nu))).collect();
    let mut entries: Vec<MinorEntry> =
        cells.par_iter().map(|&(k, nu)| scaled_minor(seq, k, nu, cfg.exp_for(k))).collect::<Result<_>>()?;
    if let Some(refine) = refine {
        let mut bits = seq.prec().max(cfg.policy.start_bits);
        while entries.iter().any(|e| e.sign.tag == SignTag::Undetermined) {
            let Some(next) = cfg.policy.next(bits) else { break };
            bits = next;
            let w = refine.at_bits(bits)?;
            let redo: Vec<usize> = (0..entries.len()).filter(|&i| entries[i].sign.tag == SignTag::Undetermined).collect();
            let fresh: Vec<MinorEntry> = redo
                .par_iter()
                .map(|&i| scaled_minor(&w, entries[i].k, entries[i].nu, cfg.exp_for(entries[i].k)))
                .collect::<Result<_>>()?;
            for (i, e) in redo.into_iter().zip(fresh) {
                entries[i] = e;
            }
        }
    }
    let scaling = (k_range.0..=k_range.1)
        .map(|k| cfg.scaling.iter().find(|s| s.k == k).cloned().unwrap_or_else(|| ScaleRecord::unit(k)))
        .collect();
    Ok(MinorReport { k_range, nu_range, scaling, entries })
}

/// Location of a minor inside a Toeplitz-type matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinorAt {
    Consecutive { k: usize, nu: usize },
    Subset { rows: Vec<usize>, cols: Vec<usize> },
}

/// Outcome of a windowed positivity check.
#[derive(Clone, Debug)]
pub enum Verdict {
    Pass,
    /// A minor certified negative.
    Fail { at: MinorAt, value: Real },
    /// A minor whose sign could not be decided at `bits`.
    Undetermined { at: MinorAt, bits: u32 },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail { .. } => "fail",
            Verdict::Undetermined { .. } => "undetermined",
        }
    }

    pub fn to_json(&self) -> Value {
        let at = |a: &MinorAt| match a {
            MinorAt::Consecutive { k, nu } => json!({"k": k, "nu": nu}),
            MinorAt::Subset { rows, cols } => json!({"rows": rows, "cols": cols}),
        };
        match self {
            Verdict::Pass => json!({"verdict": "pass"}),
            Verdict::Fail { at: a, value } => {
                let (mid, rad) = real_json(value);
                json!({"verdict": "fail", "at": at(a), "mid": mid, "rad": rad})
            }
            Verdict::Undetermined { at: a, bits } => json!({"verdict": "undetermined", "at": at(a), "bits": bits}),
        }
    }
}

/// Windowed `PF_m` evidence: every minor checked was certified positive or
/// exactly zero, or the first offending minor.
#[derive(Clone, Debug)]
pub struct PfWindowVerdict {
    pub m: usize,
    pub k_range: (usize, usize),
    pub verdict: Verdict,
    pub checked: u64,
}

impl PfWindowVerdict {
    pub fn to_json(&self) -> Value {
        let mut v = self.verdict.to_json();
        v["m"] = json!(self.m);
        v["k_range"] = json!([self.k_range.0, self.k_range.1]);
        v["checked"] = json!(self.checked);
        v
    }
}

/// Reads a verdict off a report: the first negative entry (grid order)
/// fails, otherwise the first undetermined entry makes it undetermined.
pub fn verdict_of(report: &MinorReport) -> Verdict {
    if let Some(e) = report.entries.iter().find(|e| e.sign.tag == SignTag::Negative) {
        return Verdict::Fail { at: MinorAt::Consecutive { k: e.k, nu: e.nu }, value: e.value.clone() };
    }
    if let Some(e) = report.entries.iter().find(|e| e.sign.tag == SignTag::Undetermined) {
        return Verdict::Undetermined { at: MinorAt::Consecutive { k: e.k, nu: e.nu }, bits: e.sign.at_bits };
    }
    Verdict::Pass
}

/// Checks every consecutive minor `A_k^nu`, `nu <= m`, `k` in `k_range`.
pub fn consecutive_scan(
    seq: &SequenceWindow,
    m: usize,
    k_range: (usize, usize),
    cfg: &ScanConfig,
    refine: Option<&dyn Refine>,
) -> Result<PfWindowVerdict> {
    let report = minor_report(seq, k_range, (1, m), cfg, refine)?;
    Ok(PfWindowVerdict { m, k_range, verdict: verdict_of(&report), checked: report.entries.len() as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn exact(v: Real) -> Rational {
        match v {
            Real::Exact(q) => q,
            Real::Approx(b) => panic!("expected exact value, got {b:?}"),
        }
    }

    #[test]
    fn square_of_one_plus_z() {
        let s = SequenceWindow::polynomial_i64(&[1, 2, 1]).unwrap();
        assert_eq!(exact(toeplitz_minor(&s, 1, 2).unwrap()), 3);
    }

    #[test]
    fn geometric_rank_one() {
        let s = SequenceWindow::geometric(&q(2, 1), 20);
        for k in 0..10 {
            assert_eq!(exact(toeplitz_minor(&s, k, 2).unwrap()), if k == 0 { 1 } else { 0 });
        }
        // k = 0 picks up the structural zero below the diagonal
        assert_eq!(exact(toeplitz_minor(&s, 3, 3).unwrap()), 0);
    }

    #[test]
    fn exp_triangular() {
        let s = SequenceWindow::exp_series(&q(1, 1), 10);
        assert_eq!(exact(toeplitz_minor(&s, 0, 3).unwrap()), 1);
    }

    #[test]
    fn truncated_window_refuses() {
        let s = SequenceWindow::exp_series(&q(1, 1), 4);
        assert!(matches!(toeplitz_minor(&s, 3, 3), Err(Error::OutOfEvidence { index: 5, last: 4 })));
        let p = SequenceWindow::polynomial_i64(&[1, 1]).unwrap();
        assert_eq!(exact(toeplitz_minor(&p, 3, 3).unwrap()), 0);
    }

    #[test]
    fn scan_one_plus_z() {
        let s = SequenceWindow::polynomial_i64(&[1, 1]).unwrap();
        let v = consecutive_scan(&s, 2, (0, 5), &ScanConfig::default(), None).unwrap();
        assert!(v.verdict.is_pass());
    }

    #[test]
    fn quadratic_family() {
        let ok = SequenceWindow::polynomial(&[q(1, 1), q(6, 5), q(1, 1)]).unwrap();
        assert!(consecutive_scan(&ok, 2, (0, 6), &ScanConfig::default(), None).unwrap().verdict.is_pass());
        let bad = SequenceWindow::polynomial(&[q(1, 1), q(4, 5), q(1, 1)]).unwrap();
        match consecutive_scan(&bad, 2, (0, 6), &ScanConfig::default(), None).unwrap().verdict {
            Verdict::Fail { at, value } => {
                assert_eq!(at, MinorAt::Consecutive { k: 1, nu: 2 });
                assert_eq!(exact(value), q(-9, 25));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pow2_scaling_is_undone_exactly() {
        let s = SequenceWindow::polynomial(&[q(1, 1), q(3, 1), q(3, 1), q(1, 1)]).unwrap();
        let cfg = ScanConfig { scaling: vec![ScaleRecord { k: 1, eta: None, exp2: 3 }], ..Default::default() };
        let r = minor_report(&s, (1, 1), (2, 2), &cfg, None).unwrap();
        assert_eq!(exact(r.entries[0].value.clone()), exact(toeplitz_minor(&s, 1, 2).unwrap()));
        let json = r.to_json();
        assert_eq!(json["applied_scaling"][0]["r_mid"], "8");
    }

    #[test]
    fn ball_window_escalates_through_refine() {
        // a_j = 1/j! as 8-bit balls: A_3^3 is too small to certify at 8 bits
        let coarse = |bits: u32| -> Result<SequenceWindow> {
            let e = SequenceWindow::exp_series(&q(1, 1), 12);
            SequenceWindow::truncated(e.coeffs().iter().map(|c| Real::Approx(c.to_ball(bits))).collect())
        };
        let w = coarse(8).unwrap();
        let policy = PrecisionPolicy::new(8, 256).unwrap();
        let cfg = ScanConfig { policy, scaling: Vec::new() };
        let plain = minor_report(&w, (0, 6), (1, 4), &cfg, None).unwrap();
        let refined = minor_report(&w, (0, 6), (1, 4), &cfg, Some(&coarse)).unwrap();
        assert!(plain.count(SignTag::Undetermined) > 0);
        assert_eq!(refined.count(SignTag::Undetermined), 0);
        assert!(refined.max_bits() > 8);
    }
}
