//! Two Gaussian spin densities approaching the point-dipole limit.

use defectoscope::zfs::{gaussian_orbital, DipolarKernel};
use nalgebra::{Matrix3, Vector3};

fn main() -> defectoscope::Result<()> {
    let edge = 16.0;
    let cell = Matrix3::identity() * edge;
    let kernel = DipolarKernel::new(cell, [64; 3])?;
    let d: f64 = 4.0;
    let mid = Vector3::repeat(edge / 2.0);
    for ratio in [0.2, 0.1, 0.05] {
        let at = |z: f64| gaussian_orbital("g", cell, [64; 3], mid + Vector3::new(0.0, 0.0, z), ratio * d);
        let t = kernel.pair(&at(-d / 2.0)?, &at(d / 2.0)?)?;
        println!("sigma/d = {ratio:<4}: D_zz = {:10.3} MHz, D = {:10.3} MHz", t.components[(2, 2)], t.d_scalar());
    }
    Ok(())
}
