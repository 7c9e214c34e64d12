//! The magnetic dipole-dipole kernel and its coupling constant.

use nalgebra::{Matrix3, Vector3};

use crate::units::{BOHR_MAGNETON, PLANCK, VACUUM_PERMEABILITY};

/// Free-electron g used when none is given.
pub const DEFAULT_G: f64 = 2.0023;

/// f_ab(r) = (r² δ_ab − 3 r_a r_b) / r⁵, in 1/Å³ for r in Å. Zero at r = 0.
pub fn dipolar_kernel(r: &Vector3<f64>) -> Matrix3<f64> {
    let r2 = r.norm_squared();
    if r2 == 0.0 {
        return Matrix3::zeros();
    }
    let r5 = r2 * r2 * r2.sqrt();
    Matrix3::from_fn(|a, b| {
        let delta = if a == b { r2 } else { 0.0 };
        (delta - 3.0 * r[a] * r[b]) / r5
    })
}

/// (μ₀/4π) g² μ_B² / h in MHz·Å³.
pub fn dipolar_constant_mhz_a3(g: f64) -> f64 {
    VACUUM_PERMEABILITY / (4.0 * std::f64::consts::PI) * g * g * BOHR_MAGNETON * BOHR_MAGNETON / PLANCK * 1e24
}
