//! Consecutive Toeplitz minors of the xi1 coefficients, with the radius of
//! each row moved near its saddle point.

use pfzeta::integral::{saddle_scaling, LogSeries};
use pfzeta::toeplitz::{minor_report, ScanConfig, SequenceWindow};
use pfzeta::xicoeffs::{CoeffTable, PhiConfig};
use pfzeta::{PrecisionPolicy, SignTag};

fn main() -> pfzeta::Result<()> {
    let table = CoeffTable::generate(200, &PhiConfig::default(), &PrecisionPolicy::default())?;
    let window = SequenceWindow::from_table(&table);
    let scaling = saddle_scaling(&LogSeries::from_table(&table)?, (0, 40))?;
    let cfg = ScanConfig { scaling, ..ScanConfig::default() };
    let report = minor_report(&window, (0, 40), (1, 8), &cfg, None)?;
    for nu in 1..=8 {
        let row: String = (0..=40).map(|k| report.get(k, nu).map_or("?", |e| e.sign.tag.as_str())).collect();
        println!("nu={nu}  {row}");
    }
    println!("{} positive of {}, max {} bits", report.count(SignTag::Positive), report.entries.len(), report.max_bits());
    Ok(())
}
