//! Least shift N after which every minor of a fixed row count is
//! nonnegative.

use pfzeta::toeplitz::{apf_scan, SequenceWindow};
use rug::Rational;

fn main() -> pfzeta::Result<()> {
    let q = SequenceWindow::polynomial(&[Rational::from(1), Rational::from((4, 5)), Rational::from(1)])?;
    let r = apf_scan(&q, 2, 8, 8, 1_000_000)?;
    for (n, v) in &r.transcript {
        println!("N={n}: {}", v.label());
    }
    println!("least N: {:?}", r.n);
    Ok(())
}
