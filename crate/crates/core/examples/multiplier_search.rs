//! Smallest exponential multiplier that makes a product pass a windowed
//! PF_m scan.

use pfzeta::multipliers::{min_n_search, MultiplierKind};
use pfzeta::toeplitz::{ScanConfig, SequenceWindow};
use rug::Rational;

fn main() -> pfzeta::Result<()> {
    let cfg = ScanConfig::default();
    let q = SequenceWindow::polynomial(&[Rational::from(1), Rational::from((4, 5)), Rational::from(1)])?;
    for kind in [MultiplierKind::Exp, MultiplierKind::CoshSqrt] {
        let r = min_n_search(&q, 2, (0, 12), 32, kind, &cfg)?;
        println!("{kind}: minimal n {:?}, certified {}", r.minimal_n, r.minimality_certified);
    }
    Ok(())
}
