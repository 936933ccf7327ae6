//! Power series evaluation with an explicit truncation bound.

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::ball::RAD_PREC;
use crate::numerics::{Ball, ComplexBall};

/// What is known about coefficients past the end of the stored prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailModel {
    /// The stored prefix is the whole polynomial.
    Polynomial,
    /// Coefficients are positive and log-concave, so the ratio
    /// `a_{k+1} / a_k` never exceeds the last observed ratio.
    LogConcave,
}

/// A prefix `a_0, a_1, ...` of a power series together with a tail model.
#[derive(Clone, Debug)]
pub struct PowerSeries {
    coeffs: Vec<Ball>,
    tail: TailModel,
    /// Relative size below which a term ends the summation.
    tol: Float,
}

fn f_up(x: f64) -> Float {
    Float::with_val(RAD_PREC, x)
}

fn mul_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_PREC, a * b, rug::float::Round::Up).0
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Ball>, tail: TailModel, tol: f64) -> Result<PowerSeries> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("power series needs at least one coefficient".into()));
        }
        if !(tol > 0.0) {
            return Err(Error::Invalid("series tolerance must be positive".into()));
        }
        if tail == TailModel::LogConcave && !coeffs.iter().all(Ball::is_positive) {
            return Err(Error::Invalid("log-concave tail needs certified positive coefficients".into()));
        }
        Ok(PowerSeries { coeffs, tail, tol: f_up(tol) })
    }

    /// Sets the relative cutoff to `2^-bits` (below the range of `f64`).
    pub fn with_tol_bits(mut self, bits: u32) -> PowerSeries {
        self.tol = Float::with_val(RAD_PREC, 1) >> bits;
        self
    }

    pub fn tol(&self) -> &Float {
        &self.tol
    }

    pub fn coeffs(&self) -> &[Ball] {
        &self.coeffs
    }

    pub fn tail_model(&self) -> TailModel {
        self.tail
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.iter().map(Ball::prec).max().unwrap_or(64)
    }

    /// Upper bound for `a_k / a_{k-1}`.
    fn ratio_up(&self, k: usize) -> Float {
        let num = self.coeffs[k].upper();
        let den = self.coeffs[k - 1].lower();
        Float::with_val_round(RAD_PREC, &num / &den, rug::float::Round::Up).0
    }

    /// Index at which summation stops for `|z| <= rho`, with the bound on
    /// the remaining terms weighted by `k^weight`. `None` if the prefix is
    /// too short.
    fn cutoff(&self, rho: &Float, weight: u32) -> Option<(usize, Float)> {
        let n = self.coeffs.len();
        if self.tail == TailModel::Polynomial {
            return Some((n, Float::new(RAD_PREC)));
        }
        let mut partial = Float::new(RAD_PREC);
        let mut zpow = f_up(1.0);
        let tol = self.tol.clone();
        let half = f_up(0.5);
        for k in 0..n {
            let w = if weight == 0 { f_up(1.0) } else { f_up((k as f64).max(1.0).powi(weight as i32)) };
            let term = mul_up(&mul_up(&self.coeffs[k].upper(), &zpow), &w);
            partial = Float::with_val_round(RAD_PREC, &partial + &term, rug::float::Round::Down).0;
            if k >= 1 {
                let growth = f_up((f64::from(weight) / k as f64).exp());
                let q = mul_up(&mul_up(&self.ratio_up(k), rho), &growth);
                if q <= half && term <= mul_up(&tol, &partial) {
                    // sum_{i>=1} (k+i)^w a_{k+i} rho^{k+i} <= term * q / (1 - q)
                    let one_minus = Float::with_val_round(RAD_PREC, 1 - &q, rug::float::Round::Down).0;
                    let bound = Float::with_val_round(RAD_PREC, &mul_up(&term, &q) / &one_minus, rug::float::Round::Up).0;
                    return Some((k + 1, bound));
                }
            }
            zpow = mul_up(&zpow, rho);
        }
        None
    }

    /// Rough count of coefficients needed at `|z| = rho`, extrapolating the
    /// last ratio with a `1/k^2` decay.
    fn needed_estimate(&self, rho: f64) -> usize {
        let n = self.coeffs.len();
        if n < 2 {
            return n + 1;
        }
        let rho_last = self.ratio_up(n - 1).to_f64();
        let ln = |b: &Ball| Float::with_val(64, b.mid()).ln().to_f64();
        let mut log_term = ln(&self.coeffs[n - 1]) + (n - 1) as f64 * rho.ln();
        let log_first = ln(&self.coeffs[0]);
        let log_tol = Float::with_val(64, &self.tol).ln().to_f64();
        let mut k = n - 1;
        while k < 10_000_000 {
            k += 1;
            let ratio = rho_last * ((n - 1) as f64 / k as f64).powi(2) * rho;
            log_term += ratio.ln();
            if ratio <= 0.5 && log_term < log_tol + log_first {
                return k + 1;
            }
        }
        k
    }

    fn too_short(&self, rho: &Float) -> Error {
        Error::TableTooShort { needed: self.needed_estimate(rho.to_f64()), available: self.coeffs.len() }
    }

    /// Evaluates the series at a complex point.
    pub fn eval(&self, z: &ComplexBall) -> Result<ComplexBall> {
        let rho = z.abs()?.upper();
        let (end, tail) = self.cutoff(&rho, 0).ok_or_else(|| self.too_short(&rho))?;
        let prec = self.prec().max(z.prec());
        let mut acc = ComplexBall::zero(prec);
        let mut zp = ComplexBall::one(prec);
        for k in 0..end {
            acc = acc.add(&zp.scale(&self.coeffs[k]));
            if k + 1 < end {
                zp = zp.mul(z);
            }
        }
        Ok(acc.add_error(&tail))
    }

    /// Weighted sums `S_j = sum_k k^j a_k r^k` for `j = 0..=j_max` at real
    /// `r >= 0`.
    pub fn moments(&self, r: &Ball, j_max: u32) -> Result<Vec<Ball>> {
        if r.lower() < 0 {
            return Err(Error::Domain("moments need r >= 0".into()));
        }
        let rho = r.upper();
        let (end, tail) = self.cutoff(&rho, j_max).ok_or_else(|| self.too_short(&rho))?;
        let prec = self.prec().max(r.prec());
        let mut sums = vec![Ball::zero(prec); j_max as usize + 1];
        let mut rp = Ball::one(prec);
        for k in 0..end {
            let base = self.coeffs[k].mul_ref(&rp);
            let mut w = base;
            for (j, s) in sums.iter_mut().enumerate() {
                if j > 0 {
                    w = w.mul_i64(k as i64);
                }
                *s = s.add_ref(&w);
            }
            rp = rp.mul_ref(r);
        }
        Ok(sums.into_iter().map(|s| s.add_error(&tail)).collect())
    }

    /// Real evaluation, `f(r)`.
    pub fn eval_real(&self, r: &Ball) -> Result<Ball> {
        Ok(self.moments(r, 0)?.remove(0))
    }
}
