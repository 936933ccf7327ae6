//! Saddle points of b(eta) = log f(e^eta) for xi1 and the power-of-two
//! radii derived from them.

use pfzeta::integral::{saddle_eta, saddle_scaling, LogSeries};
use pfzeta::xicoeffs::{CoeffTable, PhiConfig};
use pfzeta::PrecisionPolicy;

fn main() -> pfzeta::Result<()> {
    let table = CoeffTable::generate(200, &PhiConfig::default(), &PrecisionPolicy::default())?;
    let ls = LogSeries::from_table(&table)?.with_tol_bits(64);
    println!("threshold k_min = {}", ls.k_min()?);
    for k in [1, 5, 10, 20, 40] {
        let s = saddle_eta(&ls, k, 1e-12)?;
        println!("k={k:<3} eta {:.6}  b'' {:.4e}", s.eta.to_f64(), ls.b_second(&s.eta)?.to_f64());
    }
    for r in saddle_scaling(&ls, (0, 40))?.iter().step_by(8) {
        println!("{r:?}");
    }
    Ok(())
}
