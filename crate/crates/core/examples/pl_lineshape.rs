//! Photoluminescence of the shipped mode table at 4 K and 300 K.
//!
//! Run with `cargo run --example pl_lineshape`.

use std::path::Path;

use defectoscope::io::parse_mode_table;
use defectoscope::lineshape::{lineshape_generating, pl_spectrum, stokes_shift, total_hr, zpl_weight};
use defectoscope::Grid;

fn main() -> defectoscope::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/vb_modes.csv");
    let modes = parse_mode_table(&path)?;
    let hr = total_hr(&modes)?;
    println!("S_tot = {:.2} (A1 {:.2}, E {:.2})", hr.total, hr.a1, hr.e);
    println!("Stokes shift = {:.1} meV", stokes_shift(&modes)?);

    let grid = Grid::new(-0.2, 0.8, 4001)?;
    for t in [4.0, 300.0] {
        let f = lineshape_generating(&modes, t, 5.0, &grid)?;
        let pl = pl_spectrum(&f, 1.69)?;
        let (peak, _) = pl.peak().expect("non-empty spectrum");
        println!("T = {t:>5} K: ZPL weight {:.4}, PL peak at {peak:.3} eV", zpl_weight(&modes, t)?);
    }
    Ok(())
}
