//! Exhaustive minor enumeration: brute-force `PF_m` windows, the
//! consecutive-versus-all comparison for positive matrices, and the search
//! for the first shift `N` after which all minors are nonnegative.

use itertools::Itertools;
use rayon::prelude::*;
use rug::{Integer, Rational};

use super::{det_with_zero_lines, MinorAt, PfWindowVerdict, SequenceWindow, Verdict, WindowSource};
use crate::error::{Error, Result};
use crate::numerics::det::{bareiss_det, bareiss_det_i128};
use crate::numerics::{Real, SignTag};

/// Number of minors of order `1..=m` in a `rows x cols` matrix.
pub fn minor_count(rows: usize, cols: usize, m: usize, consecutive_only: bool) -> u128 {
    (1..=m.min(rows).min(cols))
        .map(|nu| {
            if consecutive_only {
                ((rows - nu + 1) * (cols - nu + 1)) as u128
            } else {
                binom(rows, nu) * binom(cols, nu)
            }
        })
        .sum()
}

fn binom(n: usize, k: usize) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Enumeration bound for `bruteforce_minors`: degree `+ m + 4` for
/// polynomials, the stored length for truncated series.
pub fn default_bound(seq: &SequenceWindow, m: usize) -> usize {
    match seq.source() {
        WindowSource::Polynomial => seq.last() + m + 4,
        WindowSource::TruncatedSeries => seq.last() + 1,
    }
}

/// Integer form of an exact matrix: each row multiplied by the positive
/// lcm of its denominators, which leaves every minor's sign unchanged.
struct IntMatrix {
    small: Option<Vec<Vec<i128>>>,
    big: Vec<Vec<Integer>>,
    row_scale: Vec<Integer>,
}

impl IntMatrix {
    fn new(m: &[Vec<Rational>]) -> IntMatrix {
        let mut big = Vec::with_capacity(m.len());
        let mut row_scale = Vec::with_capacity(m.len());
        for row in m {
            let mut l = Integer::from(1);
            for q in row {
                l.lcm_mut(q.denom());
            }
            big.push(row.iter().map(|q| q.numer() * Integer::from(&l / q.denom())).collect::<Vec<_>>());
            row_scale.push(l);
        }
        let limit = Integer::from(1) << 40;
        let fits = big.iter().flatten().all(|x| x.clone().abs() < limit);
        let small = fits.then(|| big.iter().map(|r| r.iter().map(|x| x.to_i128().expect("fits")).collect()).collect());
        IntMatrix { small, big, row_scale }
    }

    fn minor(&self, rows: &[usize], cols: &[usize]) -> Integer {
        if let Some(s) = &self.small {
            let sub: Vec<Vec<i128>> = rows.iter().map(|&r| cols.iter().map(|&c| s[r][c]).collect()).collect();
            if sub.iter().any(|r| r.iter().all(|&x| x == 0)) {
                return Integer::new();
            }
            if let Some(d) = bareiss_det_i128(&sub) {
                return Integer::from(d);
            }
        }
        let sub: Vec<Vec<Integer>> = rows.iter().map(|&r| cols.iter().map(|&c| self.big[r][c].clone()).collect()).collect();
        bareiss_det(sub).expect("square")
    }

    fn value(&self, rows: &[usize], d: Integer) -> Rational {
        let mut s = Integer::from(1);
        for &r in rows {
            s *= &self.row_scale[r];
        }
        Rational::from((d, s))
    }
}

enum Event {
    Fail(Vec<usize>, Vec<usize>, Real),
    Undetermined(Vec<usize>, Vec<usize>, u32),
}

fn line_sets(n: usize, nu: usize, consecutive: bool) -> Vec<Vec<usize>> {
    if consecutive {
        (0..=n - nu).map(|s| (s..s + nu).collect()).collect()
    } else {
        (0..n).combinations(nu).collect()
    }
}

/// Scans every minor of order `<= m` of `mat` (consecutive rows and
/// columns only, if asked). A violation is a certified negative minor, or
/// with `strict` also an exact zero. Returns the first violation in order
/// `(nu, rows, cols)`, else the first undetermined minor, else pass.
fn scan_matrix(mat: &[Vec<Real>], m: usize, consecutive: bool, strict: bool) -> Result<Verdict> {
    let rows = mat.len();
    let cols = mat.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || mat.iter().any(|r| r.len() != cols) {
        return Err(Error::Invalid("matrix must be nonempty and rectangular".into()));
    }
    let exact = mat.iter().flatten().all(Real::is_exact);
    let prec = mat
        .iter()
        .flatten()
        .filter_map(|x| match x {
            Real::Approx(b) => Some(b.prec()),
            Real::Exact(_) => None,
        })
        .max()
        .unwrap_or(128);
    let violates = |tag: SignTag| tag == SignTag::Negative || (strict && tag == SignTag::Zero);
    let mut first_undetermined: Option<Event> = None;
    for nu in 1..=m.min(rows).min(cols) {
        let row_sets = line_sets(rows, nu, consecutive);
        let col_sets = line_sets(cols, nu, consecutive);
        if exact {
            let q: Vec<Vec<Rational>> = mat
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| match x {
                            Real::Exact(q) => q.clone(),
                            Real::Approx(_) => unreachable!(),
                        })
                        .collect()
                })
                .collect();
            let im = IntMatrix::new(&q);
            let hit = row_sets.par_iter().find_map_first(|rs| {
                col_sets.iter().find_map(|cs| {
                    let d = im.minor(rs, cs);
                    let tag = match d.cmp0() {
                        std::cmp::Ordering::Greater => SignTag::Positive,
                        std::cmp::Ordering::Less => SignTag::Negative,
                        std::cmp::Ordering::Equal => SignTag::Zero,
                    };
                    violates(tag).then(|| (rs.clone(), cs.clone(), Real::Exact(im.value(rs, d))))
                })
            });
            if let Some((r, c, v)) = hit {
                return Ok(Verdict::Fail { at: MinorAt::Subset { rows: r, cols: c }, value: v });
            }
        } else {
            let per_row: Vec<Result<(Option<Event>, Option<Event>)>> = row_sets
                .par_iter()
                .map(|rs| {
                    let mut undet = None;
                    for cs in &col_sets {
                        let sub: Vec<Vec<Real>> = rs.iter().map(|&r| cs.iter().map(|&c| mat[r][c].clone()).collect()).collect();
                        let v = det_with_zero_lines(&sub, prec)?;
                        let s = v.sign();
                        if violates(s.tag) {
                            return Ok((Some(Event::Fail(rs.clone(), cs.clone(), v)), undet));
                        }
                        if s.tag == SignTag::Undetermined && undet.is_none() {
                            undet = Some(Event::Undetermined(rs.clone(), cs.clone(), s.at_bits));
                        }
                    }
                    Ok((None, undet))
                })
                .collect();
            let mut undet_here = None;
            for r in per_row {
                let (fail, undet) = r?;
                if let Some(Event::Fail(r, c, v)) = fail {
                    return Ok(Verdict::Fail { at: MinorAt::Subset { rows: r, cols: c }, value: v });
                }
                if undet_here.is_none() {
                    undet_here = undet;
                }
            }
            if first_undetermined.is_none() {
                first_undetermined = undet_here;
            }
        }
    }
    Ok(match first_undetermined {
        Some(Event::Undetermined(r, c, bits)) => Verdict::Undetermined { at: MinorAt::Subset { rows: r, cols: c }, bits },
        _ => Verdict::Pass,
    })
}

fn toeplitz_block(seq: &SequenceWindow, rows: usize, cols: usize, col_shift: usize) -> Result<Vec<Vec<Real>>> {
    (0..rows)
        .map(|r| (0..cols).map(|c| seq.get((c + col_shift) as i64 - r as i64)).collect())
        .collect()
}

fn check_budget(count: u128, budget: u128) -> Result<()> {
    if count > budget {
        return Err(Error::Budget { count, budget });
    }
    Ok(())
}

/// Checks every minor of order `<= m` of `(a_{c-r})`, `r < row_bound`,
/// `c < col_bound`. Refuses when the number of minors exceeds `budget`.
pub fn bruteforce_minors(
    seq: &SequenceWindow,
    m: usize,
    row_bound: usize,
    col_bound: usize,
    budget: u128,
) -> Result<PfWindowVerdict> {
    if m == 0 || row_bound == 0 || col_bound == 0 {
        return Err(Error::Invalid("order and bounds must be positive".into()));
    }
    seq.require(col_bound - 1)?;
    let count = minor_count(row_bound, col_bound, m, false);
    check_budget(count, budget)?;
    let mat = toeplitz_block(seq, row_bound, col_bound, 0)?;
    let verdict = scan_matrix(&mat, m, false, false)?;
    Ok(PfWindowVerdict { m, k_range: (0, col_bound - 1), verdict, checked: count as u64 })
}

/// Whether all consecutive minors, and all minors, of order `<= m` are
/// strictly positive; the two flags are computed independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FeketeResult {
    pub consecutive_ok: bool,
    pub all_ok: bool,
}

pub fn fekete_check(mat: &[Vec<Rational>], m: usize) -> Result<FeketeResult> {
    let real: Vec<Vec<Real>> = mat.iter().map(|r| r.iter().cloned().map(Real::Exact).collect()).collect();
    let consecutive_ok = scan_matrix(&real, m, true, true)?.is_pass();
    let all_ok = scan_matrix(&real, m, false, true)?.is_pass();
    Ok(FeketeResult { consecutive_ok, all_ok })
}

/// Result of the shift search: the least passing `N` (if any) and the
/// verdict for each `N` tried.
#[derive(Clone, Debug)]
pub struct ApfResult {
    pub n: Option<usize>,
    pub transcript: Vec<(usize, Verdict)>,
}

impl ApfResult {
    /// True when the search stopped on a minor whose sign was undecided.
    pub fn poisoned(&self) -> bool {
        matches!(self.transcript.last(), Some((_, Verdict::Undetermined { .. })))
    }
}

/// Least `N <= n_cap` such that every minor of order `<= m` of the
/// `m x col_bound` matrix `(a_{N+j-l})` is nonnegative. The search stops at
/// the first `N` with an undecided minor, since a later pass could not be
/// called minimal.
pub fn apf_scan(seq: &SequenceWindow, m: usize, n_cap: usize, col_bound: usize, budget: u128) -> Result<ApfResult> {
    if m == 0 || col_bound == 0 {
        return Err(Error::Invalid("order and column bound must be positive".into()));
    }
    seq.require(n_cap + col_bound - 1)?;
    check_budget(minor_count(m, col_bound, m, false), budget)?;
    let mut transcript = Vec::new();
    for n in 0..=n_cap {
        let mat = toeplitz_block(seq, m, col_bound, n)?;
        let v = scan_matrix(&mat, m, false, false)?;
        let stop = match &v {
            Verdict::Pass => Some(Some(n)),
            Verdict::Undetermined { .. } => Some(None),
            Verdict::Fail { .. } => None,
        };
        transcript.push((n, v));
        if let Some(found) = stop {
            return Ok(ApfResult { n: found, transcript });
        }
    }
    Ok(ApfResult { n: None, transcript })
}

/// Totally positive `n x n` matrix from elementary bidiagonal factors.
///
/// `params` supplies `n(n-1)/2` lower factors, `n` diagonal entries and
/// `n(n-1)/2` upper factors, all positive. Both triangular parts follow
/// the reduced word `1; 2 1; 3 2 1; ...` of the longest permutation, which
/// makes every minor strictly positive.
pub fn tp_matrix(n: usize, params: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    let half = n * (n - 1) / 2;
    if params.len() != 2 * half + n {
        return Err(Error::Invalid(format!("tp_matrix({n}) needs {} parameters, got {}", 2 * half + n, params.len())));
    }
    if params.iter().any(|p| *p <= 0) {
        return Err(Error::Invalid("tp_matrix parameters must be positive".into()));
    }
    let word: Vec<usize> = (1..n).flat_map(|k| (0..k).rev()).collect();
    let mut a: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| Rational::from(u32::from(i == j))).collect()).collect();
    let mut p = params.iter();
    // right-multiply by I + t E_{i+1,i}: column i += t * column i+1
    for &i in &word {
        let t = p.next().expect("counted");
        for row in a.iter_mut() {
            let add = Rational::from(&row[i + 1] * t);
            row[i] += add;
        }
    }
    // diagonal: scale column j
    for j in 0..n {
        let d = p.next().expect("counted");
        for row in a.iter_mut() {
            row[j] *= d;
        }
    }
    // right-multiply by I + t E_{i,i+1}: column i+1 += t * column i
    for &i in &word {
        let t = p.next().expect("counted");
        for row in a.iter_mut() {
            let add = Rational::from(&row[i] * t);
            row[i + 1] += add;
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn qm(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect()
    }

    #[test]
    fn one_plus_z_is_pf3() {
        let s = SequenceWindow::polynomial_i64(&[1, 1]).unwrap();
        assert!(bruteforce_minors(&s, 3, 6, 6, 1 << 20).unwrap().verdict.is_pass());
    }

    #[test]
    fn one_plus_z_squared_fails_at_two() {
        let s = SequenceWindow::polynomial_i64(&[1, 0, 1]).unwrap();
        let v = bruteforce_minors(&s, 2, 5, 5, 1 << 20).unwrap();
        match v.verdict {
            Verdict::Fail { value: Real::Exact(x), at } => {
                assert_eq!(x, -1);
                assert_eq!(at, MinorAt::Subset { rows: vec![0, 1], cols: vec![1, 2] });
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn budget_refusal_carries_counts() {
        let s = SequenceWindow::polynomial_i64(&[1, 1]).unwrap();
        match bruteforce_minors(&s, 4, 20, 20, 1000) {
            Err(Error::Budget { count, budget }) => {
                assert_eq!(budget, 1000);
                assert_eq!(count, minor_count(20, 20, 4, false));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fekete_small_cases() {
        let a = fekete_check(&qm(&[&[1, 1], &[1, 2]]), 2).unwrap();
        assert_eq!(a, FeketeResult { consecutive_ok: true, all_ok: true });
        let pascal = qm(&[&[1, 1, 1], &[1, 2, 3], &[1, 3, 6]]);
        assert_eq!(fekete_check(&pascal, 3).unwrap(), FeketeResult { consecutive_ok: true, all_ok: true });
        // positive entries, negative 2x2 minor
        let b = fekete_check(&qm(&[&[2, 1], &[1, 0]]), 2).unwrap();
        assert!(!b.consecutive_ok && !b.all_ok);
    }

    #[test]
    fn bidiagonal_products_are_tp() {
        let params: Vec<Rational> = (1..=16).map(|i| q(i, 3)).collect();
        let a = tp_matrix(4, &params).unwrap();
        assert_eq!(fekete_check(&a, 4).unwrap(), FeketeResult { consecutive_ok: true, all_ok: true });
    }

    #[test]
    fn apf_examples() {
        let e = SequenceWindow::exp_series(&q(1, 1), 20);
        assert_eq!(apf_scan(&e, 3, 4, 8, 1 << 20).unwrap().n, Some(0));
        let c = SequenceWindow::polynomial(&[q(1, 1), q(4, 5), q(1, 1)]).unwrap();
        let r = apf_scan(&c, 2, 5, 8, 1 << 20).unwrap();
        assert_eq!(r.n, Some(2));
        assert_eq!(r.transcript.len(), 3);
        let g = SequenceWindow::geometric(&q(2, 1), 20);
        assert_eq!(apf_scan(&g, 3, 2, 8, 1 << 20).unwrap().n, Some(0));
    }
}
