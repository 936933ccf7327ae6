//! Iterated Turán expressions on xi1, and the three-by-three determinant
//! form of the second level next to the recursion.

use pfzeta::toeplitz::SequenceWindow;
use pfzeta::turan::{t2_det_compare, TuranGrid};
use pfzeta::xicoeffs::{CoeffTable, PhiConfig};
use pfzeta::{PrecisionPolicy, SignTag};

fn main() -> pfzeta::Result<()> {
    let table = CoeffTable::generate(70, &PhiConfig::default(), &PrecisionPolicy::default())?;
    let w = SequenceWindow::from_table(&table);
    let grid = TuranGrid::build("xi1", &w, 3, (1, 60))?;
    for n in 1..=3 {
        let row: Vec<_> = grid.entries.iter().filter(|e| e.n == n).collect();
        let pos = row.iter().filter(|e| e.sign.tag == SignTag::Positive).count();
        println!("T_{n}: {pos}/{} positive", row.len());
    }
    let cube = SequenceWindow::polynomial_i64(&[1, 3, 3, 1])?;
    let c = t2_det_compare(&cube, 2)?;
    println!("(1+z)^3 at k=2: {}", c.to_json());
    for k in [2, 10, 20, 40] {
        let c = t2_det_compare(&w, k)?;
        println!("xi1 k={k:<2} T_2 {}  det {}", c.t2_sign.tag.as_str(), c.det_sign.tag.as_str());
    }
    Ok(())
}
