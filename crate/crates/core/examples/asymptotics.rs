//! Growth of log |xi1| along a ray against its leading terms.

use pfzeta::xicoeffs::{asym_diag, CoeffTable, PhiConfig, XiSeries};
use pfzeta::PrecisionPolicy;

fn main() -> pfzeta::Result<()> {
    let table = CoeffTable::generate(200, &PhiConfig::default(), &PrecisionPolicy::default())?;
    let s = XiSeries::new(table)?;
    for theta in [0.0, 1.5] {
        for row in asym_diag(&[10.0, 100.0, 1000.0, 8f64.exp()], &s, theta)? {
            println!(
                "theta {theta} r {:>8.1}: log|xi1| {:>10.4} leading {:>10.4} rem/log r {:>8.4} ratio {:.4}",
                row.r, row.log_abs, row.leading, row.remainder_over_log_r, row.log_derivative_ratio
            );
        }
    }
    Ok(())
}
