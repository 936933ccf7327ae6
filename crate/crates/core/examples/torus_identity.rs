//! A Toeplitz minor against its integral over the torus, for e^z and for
//! the quadratic 1 + 0.8 z + z^2, where the second-order minor is negative.

use pfzeta::integral::{j_split, lemma1_check, CubatureConfig, LogSeries};
use pfzeta::toeplitz::SequenceWindow;
use pfzeta::Ball;
use rug::Rational;

fn main() -> pfzeta::Result<()> {
    let e = SequenceWindow::exp_series(&Rational::from(1), 200);
    for nu in 1..=2 {
        for k in 0..=4 {
            let c = lemma1_check(&e, k, &Ball::zero(128), &CubatureConfig::new(nu, 64))?;
            println!("exp nu={nu} k={k}  residual {:.2e}", c.rel_residual);
        }
    }
    let q = SequenceWindow::polynomial(&[Rational::from(1), Rational::from((4, 5)), Rational::from(1)])?;
    println!("{}", lemma1_check(&q, 1, &Ball::zero(128), &CubatureConfig::new(2, 64))?.to_json());

    let ls = LogSeries::from_window(&e, 128)?;
    let eta = Ball::from_f64(20f64.ln(), 128);
    let s = j_split(&ls, 20, &eta, &CubatureConfig::new(2, 128))?;
    println!("k=20 split at sigma {:.3}: central {:.3e}, outer {:.3e}", s.sigma, s.central, s.outer);
    Ok(())
}
