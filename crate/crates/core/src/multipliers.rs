//! Products with `e^{n z}` and `cosh(n sqrt z)`, and the search for the
//! smallest `n` whose product passes a windowed `PF_m` scan.

use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::Real;
use crate::toeplitz::{consecutive_scan, PfWindowVerdict, ScanConfig, SequenceWindow, Verdict, WindowSource};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplierKind {
    /// `e^{n z}`: coefficients `n^j / j!`.
    Exp,
    /// `cosh(n sqrt z)`: coefficients `n^{2j} / (2j)!`.
    CoshSqrt,
}

impl fmt::Display for MultiplierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MultiplierKind::Exp => "exp",
            MultiplierKind::CoshSqrt => "cosh_sqrt",
        })
    }
}

impl FromStr for MultiplierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" => Ok(MultiplierKind::Exp),
            "cosh_sqrt" => Ok(MultiplierKind::CoshSqrt),
            other => Err(Error::Parse(format!("unknown multiplier kind {other:?} (expected exp or cosh_sqrt)"))),
        }
    }
}

/// `m(n z) f(epsilon z)` with `m` the multiplier of the given kind.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierSpec {
    pub kind: MultiplierKind,
    pub n: Rational,
    /// Argument scale applied to the source; `None` means 1.
    pub epsilon: Option<Rational>,
}

impl MultiplierSpec {
    pub fn new(kind: MultiplierKind, n: u64) -> MultiplierSpec {
        MultiplierSpec { kind, n: Rational::from(n), epsilon: None }
    }

    /// `m(z) f(epsilon z)`.
    pub fn scaled_source(kind: MultiplierKind, epsilon: Rational) -> MultiplierSpec {
        MultiplierSpec { kind, n: Rational::from(1), epsilon: Some(epsilon) }
    }
}

/// The first `last + 1` multiplier coefficients, exact.
pub fn multiplier_coeffs(kind: MultiplierKind, n: &Rational, last: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(last + 1);
    let mut v = Rational::from(1);
    let step = match kind {
        MultiplierKind::Exp => n.clone(),
        MultiplierKind::CoshSqrt => Rational::from(n * n),
    };
    for j in 0..=last {
        if j > 0 {
            v *= &step;
            match kind {
                MultiplierKind::Exp => v /= j as u64,
                MultiplierKind::CoshSqrt => v /= Integer::from(2 * j as u64) * Integer::from(2 * j as u64 - 1),
            }
        }
        out.push(v.clone());
    }
    out
}

/// Coefficients `c_0 ..= c_last` of the product. The convolution is lower
/// triangular, so the output is exact wherever the input is.
pub fn mul_coeffs(src: &SequenceWindow, spec: &MultiplierSpec, last: usize) -> Result<SequenceWindow> {
    if src.source() == WindowSource::TruncatedSeries {
        src.require(last)?;
    }
    let base = match &spec.epsilon {
        Some(e) => src.scaled(e),
        None => src.clone(),
    };
    let mult = multiplier_coeffs(spec.kind, &spec.n, last);
    let a: Vec<Real> = (0..=last).map(|i| base.get(i as i64)).collect::<Result<_>>()?;
    let coeffs: Vec<Real> = (0..=last)
        .map(|j| {
            (0..=j).fold(Real::zero(), |acc, i| {
                if mult[j - i] == 0 {
                    acc
                } else {
                    acc.add(&a[i].mul_rational(&mult[j - i]))
                }
            })
        })
        .collect();
    let source = if spec.n == 0 { src.source() } else { WindowSource::TruncatedSeries };
    SequenceWindow::new(coeffs, source)
}

/// Per-`n` verdicts of a multiplier search.
#[derive(Clone, Debug)]
pub struct MinNSearch {
    pub kind: MultiplierKind,
    pub m: usize,
    pub k_range: (usize, usize),
    pub tried: Vec<(u64, PfWindowVerdict)>,
    /// The first `n` whose product passed.
    pub minimal_n: Option<u64>,
    /// Every `n` before `minimal_n` was a certified failure.
    pub minimality_certified: bool,
}

impl MinNSearch {
    pub fn to_json(&self) -> Value {
        let verdicts: Vec<Value> = self
            .tried
            .iter()
            .map(|(n, v)| {
                let mut j = v.to_json();
                j["n"] = json!(n);
                j
            })
            .collect();
        json!({
            "kind": self.kind.to_string(),
            "m": self.m,
            "k_range": [self.k_range.0, self.k_range.1],
            "n_tried": self.tried.iter().map(|(n, _)| *n).collect::<Vec<_>>(),
            "minimal_n": self.minimal_n,
            "minimality_certified": self.minimality_certified,
            "verdicts": verdicts,
        })
    }

    pub fn any_undetermined(&self) -> bool {
        self.tried.iter().any(|(_, v)| matches!(v.verdict, Verdict::Undetermined { .. }))
    }
}

/// Tries `n = 0, 1, ..., n_cap` in order and stops at the first product
/// whose consecutive minors of order `<= m` pass on `k_range`.
pub fn min_n_search(
    src: &SequenceWindow,
    m: usize,
    k_range: (usize, usize),
    n_cap: u64,
    kind: MultiplierKind,
    cfg: &ScanConfig,
) -> Result<MinNSearch> {
    if m == 0 {
        return Err(Error::Invalid("order must be positive".into()));
    }
    let last = k_range.1 + m - 1;
    let mut tried = Vec::new();
    let mut minimal_n = None;
    for n in 0..=n_cap {
        let w = mul_coeffs(src, &MultiplierSpec::new(kind, n), last)?;
        let v = consecutive_scan(&w, m, k_range, cfg, None)?;
        let pass = v.verdict.is_pass();
        tried.push((n, v));
        if pass {
            minimal_n = Some(n);
            break;
        }
    }
    let minimality_certified = minimal_n.is_some() && tried[..tried.len() - 1].iter().all(|(_, v)| v.verdict.is_fail());
    Ok(MinNSearch { kind, m, k_range, tried, minimal_n, minimality_certified })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(w: &SequenceWindow) -> Vec<Rational> {
        w.coeffs()
            .iter()
            .map(|c| match c {
                Real::Exact(q) => q.clone(),
                Real::Approx(_) => panic!("expected exact"),
            })
            .collect()
    }

    #[test]
    fn zero_multiplier_is_identity() {
        let s = SequenceWindow::polynomial_i64(&[3, 1, 4, 1, 5]).unwrap();
        let w = mul_coeffs(&s, &MultiplierSpec::new(MultiplierKind::Exp, 0), 6).unwrap();
        assert_eq!(exact(&w), [3, 1, 4, 1, 5, 0, 0].map(Rational::from));
    }

    #[test]
    fn exp_squared() {
        let e = SequenceWindow::exp_series(&Rational::from(1), 20);
        let w = mul_coeffs(&e, &MultiplierSpec::new(MultiplierKind::Exp, 1), 20).unwrap();
        assert_eq!(exact(&w), exact(&SequenceWindow::exp_series(&Rational::from(2), 20)));
    }

    #[test]
    fn cosh_of_constant() {
        let one = SequenceWindow::polynomial_i64(&[1]).unwrap();
        let w = mul_coeffs(&one, &MultiplierSpec::new(MultiplierKind::CoshSqrt, 2), 6).unwrap();
        let mut f = Integer::from(1);
        for (j, c) in exact(&w).into_iter().enumerate() {
            if j > 0 {
                f *= (2 * j as u64) * (2 * j as u64 - 1);
            }
            assert_eq!(c, Rational::from((Integer::from(Integer::u_pow_u(4, j as u32)), f.clone())));
        }
    }

    #[test]
    fn truncated_source_bounds_output() {
        let e = SequenceWindow::exp_series(&Rational::from(1), 5);
        assert!(mul_coeffs(&e, &MultiplierSpec::new(MultiplierKind::Exp, 1), 6).is_err());
    }

    #[test]
    fn searches() {
        let cfg = ScanConfig::default();
        let s = SequenceWindow::polynomial_i64(&[2, 7, 1, 8]).unwrap();
        let r = min_n_search(&s, 1, (0, 10), 4, MultiplierKind::Exp, &cfg).unwrap();
        assert_eq!(r.minimal_n, Some(0));
        let q = SequenceWindow::polynomial(&[Rational::from(1), Rational::from((4, 5)), Rational::from(1)]).unwrap();
        let r = min_n_search(&q, 2, (0, 12), 10, MultiplierKind::Exp, &cfg).unwrap();
        let n = r.minimal_n.expect("some n passes");
        assert!(n >= 1 && r.minimality_certified);
        assert_eq!(r.tried.len() as u64, n + 1);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("exp".parse::<MultiplierKind>().unwrap(), MultiplierKind::Exp);
        assert_eq!(MultiplierKind::CoshSqrt.to_string(), "cosh_sqrt");
        assert!("sinh".parse::<MultiplierKind>().is_err());
    }
}
