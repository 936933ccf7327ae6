//! Pólya frequency bounds from the angle of a zero-free sector, for explicit
//! zero sets and for the half-strip picture of xi.

use pfzeta::sector::{height_preset, height_report, pf_bounds, sector_of_zeros, Zero, ZeroSet};
use rug::Rational;

fn main() -> pfzeta::Result<()> {
    let zs = ZeroSet::new(vec![Zero::rect_i64(-3, 1), Zero::rect_i64(-3, -1), Zero::real(Rational::from(-2))])?;
    let theta = sector_of_zeros(&zs, 128)?;
    println!("{}", pf_bounds(Some(zs.degree()), &theta, 128)?.to_json(128));
    for name in ["rectangle", "first-zero"] {
        let h = height_preset(name).expect("known preset");
        println!("{name}: {}", height_report(&h, 128)?);
    }
    Ok(())
}
