//! Turán-type inequality chains.
//!
//! `T_1(k) = b_k^2 - ((k+1)/k) b_{k+1} b_{k-1}` and
//! `T_n(k) = T_{n-1}(k)^2 - T_{n-1}(k+1) T_{n-1}(k-1)` for `k >= n`.

use rug::{Integer, Rational};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::{real_det, Real, Sign, SignTag};
use crate::toeplitz::SequenceWindow;

fn t1(seq: &SequenceWindow, k: usize) -> Result<Real> {
    let b = seq.get(k as i64)?;
    let up = seq.get(k as i64 + 1)?;
    let down = seq.get(k as i64 - 1)?;
    let w = Rational::from((k as u64 + 1, k as u64));
    Ok(b.mul(&b).sub(&up.mul(&down).mul_rational(&w)))
}

/// `T_n(k)` for every `k` in `lo..=hi` (requires `lo >= n`).
fn level(seq: &SequenceWindow, n: usize, lo: usize, hi: usize) -> Result<Vec<Real>> {
    if n == 1 {
        return (lo..=hi).map(|k| t1(seq, k)).collect();
    }
    let prev = level(seq, n - 1, lo - 1, hi + 1)?;
    Ok((0..=hi - lo).map(|i| prev[i + 1].mul(&prev[i + 1]).sub(&prev[i + 2].mul(&prev[i]))).collect())
}

/// `T_n(k)`; exact when the window is exact.
pub fn turan_t(seq: &SequenceWindow, n: usize, k: usize) -> Result<Real> {
    if n == 0 || k < n {
        return Err(Error::Invalid(format!("T_n(k) needs k >= n >= 1, got n = {n}, k = {k}")));
    }
    seq.require(k + n)?;
    Ok(level(seq, n, k, k)?.remove(0))
}

#[derive(Clone, Debug)]
pub struct TuranEntry {
    pub n: usize,
    pub k: usize,
    pub value: Real,
    pub sign: Sign,
}

/// `T_n(k)` over `1 <= n <= n_max` and `k` in `k_range`, skipping `k < n`.
#[derive(Clone, Debug)]
pub struct TuranGrid {
    pub source_id: String,
    pub entries: Vec<TuranEntry>,
}

impl TuranGrid {
    pub fn build(source_id: &str, seq: &SequenceWindow, n_max: usize, k_range: (usize, usize)) -> Result<TuranGrid> {
        if n_max == 0 || k_range.0 > k_range.1 {
            return Err(Error::Invalid("empty Turán grid".into()));
        }
        let mut entries = Vec::new();
        for n in 1..=n_max {
            let lo = k_range.0.max(n);
            if lo > k_range.1 {
                continue;
            }
            seq.require(k_range.1 + n)?;
            for (i, value) in level(seq, n, lo, k_range.1)?.into_iter().enumerate() {
                let sign = value.sign();
                entries.push(TuranEntry { n, k: lo + i, value, sign });
            }
        }
        Ok(TuranGrid { source_id: source_id.to_string(), entries })
    }

    pub fn all(&self, tag: SignTag) -> bool {
        self.entries.iter().all(|e| e.sign.tag == tag)
    }

    pub fn count(&self, tag: SignTag) -> usize {
        self.entries.iter().filter(|e| e.sign.tag == tag).count()
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let (mid, rad) = real_strings(&e.value);
                json!({"n": e.n, "k": e.k, "sign": e.sign.tag.as_str(), "mid": mid, "rad": rad})
            })
            .collect();
        json!({"source_id": self.source_id, "entries": entries})
    }
}

pub(crate) fn real_strings(v: &Real) -> (String, String) {
    match v {
        Real::Exact(q) => (q.to_string(), "0".into()),
        Real::Approx(b) => (b.mid_decimal(), b.rad_decimal()),
    }
}

/// `T_2(k)` from the recursion next to the determinant expression
/// `c_k det[[c_k, c_{k+1}, c_{k+2}], [c_{k-1}, c_k, c_{k+1}], [c_{k-2}, c_{k-1}, c_k]]`
/// with `c_j = b_j j!`.
#[derive(Clone, Debug)]
pub struct T2Comparison {
    pub k: usize,
    pub t2: Real,
    pub det_form: Real,
    pub t2_sign: Sign,
    pub det_sign: Sign,
    /// Both signs resolved and equal.
    pub signs_agree: bool,
    /// Exactly equal (exact inputs) or overlapping enclosures.
    pub values_match: bool,
}

impl T2Comparison {
    pub fn to_json(&self) -> Value {
        let (tm, tr) = real_strings(&self.t2);
        let (dm, dr) = real_strings(&self.det_form);
        json!({
            "k": self.k,
            "t2": {"sign": self.t2_sign.tag.as_str(), "mid": tm, "rad": tr},
            "det_form": {"sign": self.det_sign.tag.as_str(), "mid": dm, "rad": dr},
            "signs_agree": self.signs_agree,
            "values_match": self.values_match,
        })
    }
}

pub fn t2_det_compare(seq: &SequenceWindow, k: usize) -> Result<T2Comparison> {
    if k < 2 {
        return Err(Error::Invalid(format!("the determinant form needs k >= 2, got {k}")));
    }
    let t2 = turan_t(seq, 2, k)?;
    let c = |j: i64| -> Result<Real> {
        let mut f = Integer::from(1);
        for i in 2..=j.max(0) as u64 {
            f *= i;
        }
        Ok(seq.get(j)?.mul_rational(&Rational::from(f)))
    };
    let k = k as i64;
    let mut m = Vec::with_capacity(3);
    for l in 0..3i64 {
        m.push((0..3i64).map(|j| c(k + j - l)).collect::<Result<Vec<_>>>()?);
    }
    let prec = seq.prec().max(128);
    let det_form = c(k)?.mul(&real_det(&m, prec)?);
    let t2_sign = t2.sign();
    let det_sign = det_form.sign();
    let signs_agree = t2_sign.tag.is_resolved() && t2_sign.tag == det_sign.tag;
    let values_match = match (&t2, &det_form) {
        (Real::Exact(a), Real::Exact(b)) => a == b,
        _ => t2.to_ball(prec).overlaps(&det_form.to_ball(prec)),
    };
    Ok(T2Comparison { k: k as usize, t2, det_form, t2_sign, det_sign, signs_agree, values_match })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(v: Real) -> Rational {
        match v {
            Real::Exact(q) => q,
            Real::Approx(_) => panic!("expected exact"),
        }
    }

    #[test]
    fn exp_has_vanishing_t1() {
        let e = SequenceWindow::exp_series(&Rational::from(1), 60);
        for k in 1..=50 {
            assert_eq!(exact(turan_t(&e, 1, k).unwrap()), 0);
        }
    }

    #[test]
    fn cube_of_one_plus_z() {
        let s = SequenceWindow::polynomial_i64(&[1, 3, 3, 1]).unwrap();
        assert_eq!(exact(turan_t(&s, 1, 1).unwrap()), 3);
        assert_eq!(exact(turan_t(&s, 1, 2).unwrap()), Rational::from((9, 2)));
        assert_eq!(exact(turan_t(&s, 1, 3).unwrap()), 1);
        assert_eq!(exact(turan_t(&s, 2, 2).unwrap()), Rational::from((69, 4)));
        let c = t2_det_compare(&s, 2).unwrap();
        assert_eq!(exact(c.det_form.clone()), 216);
        assert!(c.signs_agree);
        assert!(!c.values_match);
    }

    #[test]
    fn exp_determinant_form_vanishes() {
        let e = SequenceWindow::exp_series(&Rational::from(1), 20);
        let c = t2_det_compare(&e, 5).unwrap();
        assert_eq!(c.t2_sign.tag, SignTag::Zero);
        assert_eq!(c.det_sign.tag, SignTag::Zero);
    }

    #[test]
    fn k_below_level_rejected() {
        let s = SequenceWindow::polynomial_i64(&[1, 3, 3, 1]).unwrap();
        assert!(turan_t(&s, 2, 1).is_err());
        assert!(turan_t(&s, 0, 3).is_err());
    }

    #[test]
    fn factorial_rescaling_identity() {
        let s = SequenceWindow::polynomial(&[3, 7, 2, 9, 4, 1].map(|x| Rational::from((x, 1 + x % 3)))).unwrap();
        for k in 1..5usize {
            let t = exact(turan_t(&s, 1, k).unwrap());
            let fact = |n: usize| (1..=n as u64).fold(Integer::from(1), |a, b| a * b);
            let c = |j: usize| exact(s.get(j as i64).unwrap()) * Rational::from(fact(j));
            let rhs = c(k).clone() * c(k) - c(k + 1) * c(k - 1);
            assert_eq!(t * Rational::from(fact(k).square()), rhs);
        }
    }
}
