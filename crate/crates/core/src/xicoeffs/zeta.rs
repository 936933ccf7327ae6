//! Independent evaluation of `xi(1/2)` through `zeta(1/2)` and `Gamma(1/4)`.
//!
//! Both functions use Euler-Maclaurin type expansions with exact Bernoulli
//! numbers and an explicit bound on the first omitted term.

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::numerics::{Ball, PrecisionPolicy};

/// Bernoulli numbers `B_0 ..= B_n` (with `B_1 = -1/2`).
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::from(1));
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            b.push(Rational::new());
            continue;
        }
        // sum_{j<m} C(m+1, j) B_j = -(m+1) B_m
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (j, bj) in b.iter().enumerate() {
            if *bj != 0 {
                acc += Rational::from(bj * &binom);
            }
            binom *= (m + 1 - j) as u64;
            binom /= (j + 1) as u64;
        }
        b.push(-acc / Rational::from(m as u64 + 1));
    }
    b
}

/// `x^{-s}` for real `x > 0`.
fn pow_neg(x: &Ball, s: &Ball) -> Ball {
    x.ln().expect("positive base").mul_ref(s).neg().exp()
}

fn zeta_terms(s: &Ball, n: u64, m: usize, bern: &[Rational], prec: u32) -> (Ball, rug::Float) {
    let nb = Ball::from_i64(n as i64, prec);
    let mut sum = Ball::zero(prec);
    for j in 1..n {
        sum = sum.add_ref(&pow_neg(&Ball::from_i64(j as i64, prec), s));
    }
    let n_s = pow_neg(&nb, s);
    let one = Ball::one(prec);
    // N^{1-s}/(s-1) + N^{-s}/2
    sum = sum.add_ref(&n_s.mul_ref(&nb).div_ref(&s.sub_ref(&one)).expect("s != 1"));
    sum = sum.add_ref(&n_s.mul_2exp(-1));
    // T_j = B_2j/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    let n2 = nb.sqr();
    let mut rising = s.clone();
    let mut npow = n_s.div_ref(&nb).expect("N > 0");
    let mut fact = Integer::from(2);
    let mut omitted = Ball::zero(prec);
    for j in 1..=m + 1 {
        let coef = bern[2 * j].clone() / Rational::from(fact.clone());
        let t = rising.mul_ref(&npow).mul_rational(&coef);
        if j <= m {
            sum = sum.add_ref(&t);
        } else {
            omitted = t;
        }
        // advance: rising *= (s+2j-1)(s+2j), N^{-2}, factorial
        let a = s.add_ref(&Ball::from_i64(2 * j as i64 - 1, prec));
        let b = s.add_ref(&Ball::from_i64(2 * j as i64, prec));
        rising = rising.mul_ref(&a).mul_ref(&b);
        npow = npow.div_ref(&n2).expect("N > 0");
        fact *= (2 * j + 1) as u64;
        fact *= (2 * j + 2) as u64;
    }
    (sum, omitted.mag())
}

/// `zeta(s)` for real `s > 0`, `s != 1`, by Euler-Maclaurin summation.
///
/// For real `s` the remainder after `m` correction terms is bounded by the
/// first omitted term; cutoffs grow until that bound is below `2^-(prec+8)`.
pub fn zeta_real(s: &Rational, prec: u32) -> Result<Ball> {
    if *s <= 0 || *s == 1 {
        return Err(Error::Domain("zeta_real needs real s > 0, s != 1".into()));
    }
    let wp = prec + 32;
    let sb = Ball::from_rational(s, wp);
    let mut n = u64::from(prec + 20) / 6 + 4;
    loop {
        let m = n as usize;
        let bern = bernoulli_numbers(2 * m + 2);
        let (sum, bound) = zeta_terms(&sb, n, m, &bern, wp);
        if bound.get_exp().unwrap_or(i32::MIN) < -(prec as i32) - 8 {
            return Ok(sum.add_error(&bound).set_prec(prec));
        }
        n *= 2;
    }
}

/// `log Gamma(w)` for real `w >= 1` from Stirling's series with `m` terms.
fn ln_gamma_stirling(w: &Ball, m: usize, bern: &[Rational], prec: u32) -> (Ball, rug::Float) {
    let half = Ball::from_f64(0.5, prec);
    let two_pi = Ball::pi(prec).mul_2exp(1);
    let mut s = w.sub_ref(&half).mul_ref(&w.ln().expect("w > 0")).sub_ref(w);
    s = s.add_ref(&two_pi.ln().expect("positive").mul_2exp(-1));
    let w2 = w.sqr();
    let mut wpow = w.clone();
    let mut omitted = Ball::zero(prec);
    for j in 1..=m + 1 {
        let den = Integer::from(2 * j as u64) * Integer::from(2 * j as u64 - 1);
        let coef = bern[2 * j].clone() / Rational::from(den);
        let t = Ball::from_rational(&coef, prec).div_ref(&wpow).expect("w > 0");
        if j <= m {
            s = s.add_ref(&t);
        } else {
            omitted = t;
        }
        wpow = wpow.mul_ref(&w2);
    }
    (s, omitted.mag())
}

/// `Gamma(x)` for rational `x > 0`, via Stirling's series after shifting the
/// argument up by `n` and dividing by `x (x+1) ... (x+n-1)`.
pub fn gamma_real(x: &Rational, prec: u32) -> Result<Ball> {
    if *x <= 0 {
        return Err(Error::Domain("gamma_real needs x > 0".into()));
    }
    let wp = prec + 64;
    let xb = Ball::from_rational(x, wp);
    let mut n = u64::from(prec + 20) / 6 + 4;
    loop {
        let m = n as usize;
        let bern = bernoulli_numbers(2 * m + 2);
        let w = xb.add_ref(&Ball::from_i64(n as i64, wp));
        let (lg, bound) = ln_gamma_stirling(&w, m, &bern, wp);
        if bound.get_exp().unwrap_or(i32::MIN) < -(prec as i32) - 8 {
            let mut denom = Ball::one(wp);
            for i in 0..n {
                denom = denom.mul_ref(&xb.add_ref(&Ball::from_i64(i as i64, wp)));
            }
            let g = lg.add_error(&bound).exp().div_ref(&denom)?;
            return Ok(g.set_prec(prec));
        }
        n *= 2;
    }
}

/// `xi(1/2) = -(1/8) pi^{-1/4} Gamma(1/4) zeta(1/2)`, evaluated at the
/// policy's starting precision without touching the coefficient integrals.
pub fn xi_half_direct(policy: &PrecisionPolicy) -> Result<Ball> {
    let p = policy.start_bits;
    let half = Rational::from((1, 2));
    let quarter = Rational::from((1, 4));
    let z = zeta_real(&half, p + 16)?;
    let g = gamma_real(&quarter, p + 16)?;
    let pi_q = Ball::pi(p + 16).sqrt()?.sqrt()?;
    let v = g.mul_ref(&z).div_ref(&pi_q)?.mul_2exp(-3).neg();
    Ok(v.set_prec(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight(b: &Ball) -> bool {
        b.rad() < &1e-30
    }

    #[test]
    fn small_bernoulli_numbers() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], Rational::from((-1, 2)));
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[4], Rational::from((-1, 30)));
        assert_eq!(b[12], Rational::from((-691, 2730)));
        assert_eq!(b[7], 0);
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let z = zeta_real(&Rational::from(2), 128).unwrap();
        let expect = Ball::pi(128).sqr().div_i64(6);
        assert!(z.overlaps(&expect));
        assert!(tight(&z));
    }

    #[test]
    fn zeta_half_value() {
        let z = zeta_real(&Rational::from((1, 2)), 256).unwrap();
        assert!((z.to_f64() + 1.4603545088095868).abs() < 1e-14);
        assert!(tight(&z));
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let g = gamma_real(&Rational::from((1, 2)), 128).unwrap();
        assert!(g.overlaps(&Ball::pi(128).sqrt().unwrap()));
        assert!(tight(&g));
    }

    #[test]
    fn gamma_integer() {
        let g = gamma_real(&Rational::from(6), 128).unwrap();
        assert!(g.contains_rational(&Rational::from(120)));
    }

    #[test]
    fn xi_half_value() {
        let x = xi_half_direct(&PrecisionPolicy::fixed(256)).unwrap();
        assert!((x.to_f64() - 0.497120778188314).abs() < 1e-14);
        assert!(tight(&x));
    }

    #[test]
    fn non_positive_arguments_rejected() {
        assert!(zeta_real(&Rational::from(1), 64).is_err());
        assert!(gamma_real(&Rational::from(-1), 64).is_err());
    }
}
