//! Computes the first Maclaurin coefficients of xi1 and cross-checks b_0
//! against an independent evaluation of xi(1/2).

use std::time::Instant;

use pfzeta::xicoeffs::{xi_half_direct, CoeffTable, PhiConfig};
use pfzeta::PrecisionPolicy;

fn main() -> pfzeta::Result<()> {
    let k_max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(40);
    let policy = PrecisionPolicy::fixed(256);
    let start = Instant::now();
    let table = CoeffTable::generate(k_max, &PhiConfig::default(), &policy)?;
    println!("b_0..b_{k_max} at {} bits, node level {}, {:.2?}", table.prec_bits(), table.meta().level, start.elapsed());
    for (k, b) in table.entries().iter().enumerate().step_by(10.max(k_max / 10)) {
        println!("b_{k:<4} = {}  (rel. radius {:.1e})", b.mid().to_string_radix(10, Some(16)), b.rel_rad());
    }
    let x = xi_half_direct(&policy)?;
    let b0 = table.get(0).unwrap();
    println!("xi(1/2) = {:.20e}, overlaps b_0: {}", x.to_f64(), b0.overlaps(&x));
    println!("all certified positive: {}", table.all_positive());
    Ok(())
}
