//! Determinants: fraction-free elimination for exact input, fully pivoted
//! ball elimination otherwise.

use rug::float::Round;
use rug::{Float, Integer, Rational};

use super::ball::{Ball, RAD_PREC};
use super::real::Real;
use crate::error::{Error, Result};

fn check_square<T>(m: &[Vec<T>]) -> Result<usize> {
    let n = m.len();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    for row in m {
        if row.len() != n {
            return Err(Error::NotSquare { rows: n, cols: row.len() });
        }
    }
    Ok(n)
}

/// Bareiss elimination over the integers. Consumes its input.
pub fn bareiss_det(mut a: Vec<Vec<Integer>>) -> Result<Integer> {
    let n = check_square(&a)?;
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return Ok(Integer::new());
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                a[i][j] = t.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign < 0 { -d } else { d })
}

/// Bareiss on `i128` entries; `None` on overflow.
pub fn bareiss_det_i128(m: &[Vec<i128>]) -> Option<i128> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return Some(0) };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = t / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

/// Exact determinant of a rational matrix: rows are cleared to integers,
/// then eliminated fraction-free.
pub fn exact_det(m: &[Vec<Rational>]) -> Result<Rational> {
    check_square(m)?;
    let mut scale = Integer::from(1);
    let rows: Vec<Vec<Integer>> = m
        .iter()
        .map(|row| {
            let mut l = Integer::from(1);
            for q in row {
                l.lcm_mut(q.denom());
            }
            scale *= &l;
            row.iter().map(|q| q.numer() * Integer::from(&l / q.denom())).collect()
        })
        .collect();
    let d = bareiss_det(rows)?;
    Ok(Rational::from((d, scale)))
}

fn float_to_rational(x: &Float) -> Rational {
    x.to_rational().expect("finite float")
}

/// Hadamard bound on |det| for a matrix of balls (product of row norms).
fn hadamard_bound(rows: &[Vec<Ball>]) -> Float {
    let mut prod = Float::with_val(RAD_PREC, 1);
    for row in rows {
        let mut s = Float::new(RAD_PREC);
        for x in row {
            let m = x.mag();
            s = Float::with_val_round(RAD_PREC, &s + &Float::with_val_round(RAD_PREC, &m * &m, Round::Up).0, Round::Up).0;
        }
        let r = Float::with_val_round(RAD_PREC, s.sqrt_ref(), Round::Up).0;
        prod = Float::with_val_round(RAD_PREC, &prod * &r, Round::Up).0;
    }
    prod
}

/// Determinant enclosure for a square matrix of balls.
///
/// Exact balls (all radii zero) go through the fraction-free path and come
/// back with zero radius. Otherwise the elimination pivots on the largest
/// midpoint; if every remaining pivot candidate straddles zero the trailing
/// block is bounded with Hadamard's inequality.
pub fn ball_det(m: &[Vec<Ball>]) -> Result<Ball> {
    let n = check_square(m)?;
    let prec = m.iter().flatten().map(Ball::prec).max().unwrap_or(64);
    if m.iter().flatten().all(Ball::is_exact) {
        let q: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|b| float_to_rational(b.mid())).collect()).collect();
        let d = exact_det(&q)?;
        return Ok(exact_rational_ball(&d, prec));
    }
    let mut a: Vec<Vec<Ball>> = m.to_vec();
    let mut det = Ball::one(prec);
    let mut negate = false;
    for k in 0..n {
        // full pivot on |mid|
        let mut best: Option<(usize, usize)> = None;
        let mut best_mag = Float::new(prec);
        for i in k..n {
            for j in k..n {
                let v = Float::with_val(prec, &*a[i][j].mid().as_abs());
                if best.is_none() || v > best_mag {
                    best_mag = v;
                    best = Some((i, j));
                }
            }
        }
        let (pi, pj) = best.unwrap();
        if pi != k {
            a.swap(pi, k);
            negate = !negate;
        }
        if pj != k {
            for row in a.iter_mut() {
                row.swap(pj, k);
            }
            negate = !negate;
        }
        let pivot = a[k][k].clone();
        if pivot.contains_zero() {
            let rest: Vec<Vec<Ball>> = a[k..].iter().map(|r| r[k..].to_vec()).collect();
            if rest.iter().flatten().all(Ball::is_exact_zero) {
                return Ok(Ball::zero(prec));
            }
            let h = hadamard_bound(&rest);
            let tail = Ball::new(Float::new(prec), &h);
            det = det.mul_ref(&tail);
            return Ok(if negate { det.neg() } else { det });
        }
        det = det.mul_ref(&pivot);
        for i in k + 1..n {
            if a[i][k].is_exact_zero() {
                continue;
            }
            let l = a[i][k].div_ref(&pivot)?;
            for j in k + 1..n {
                let t = l.mul_ref(&a[k][j]);
                a[i][j] = a[i][j].sub_ref(&t);
            }
        }
    }
    Ok(if negate { det.neg() } else { det })
}

/// A ball holding `q`, exact when `q` is dyadic.
pub fn exact_rational_ball(q: &Rational, prec: u32) -> Ball {
    let den = q.denom();
    if den.is_power_of_two() {
        let bits = q.numer().significant_bits().max(1) + 1;
        Ball::exact(Float::with_val(prec.max(bits), q))
    } else {
        Ball::from_rational(q, prec)
    }
}

/// Determinant of a matrix of [`Real`]s: exact if every entry is exact.
pub fn real_det(m: &[Vec<Real>], prec: u32) -> Result<Real> {
    check_square(m)?;
    if m.iter().flatten().all(Real::is_exact) {
        let q: Vec<Vec<Rational>> = m
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
        return Ok(Real::Exact(exact_det(&q)?));
    }
    let b: Vec<Vec<Ball>> = m.iter().map(|r| r.iter().map(|x| x.to_ball(prec)).collect()).collect();
    Ok(Real::Approx(ball_det(&b)?))
}
