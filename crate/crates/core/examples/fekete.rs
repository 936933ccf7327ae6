//! Consecutive-minor positivity against all-minor positivity on products of
//! bidiagonal factors.

use pfzeta::toeplitz::{fekete_check, tp_matrix};
use rug::Rational;

fn main() -> pfzeta::Result<()> {
    for n in 2..=5usize {
        let params: Vec<Rational> = (0..n * n).map(|i| Rational::from((1 + i % 7, 1 + i % 3))).collect();
        let mut m = tp_matrix(n, &params)?;
        println!("n={n} {:?}", fekete_check(&m, n)?);
        m[0][n - 1] += 1000;
        println!("n={n} perturbed {:?}", fekete_check(&m, n)?);
    }
    Ok(())
}
