//! Rigid rotations of spin systems (ZYZ Euler convention).

use nalgebra::{Matrix3, Rotation3, Vector3};

use super::system::SpinSystem;

/// R = R_z(α) R_y(β) R_z(γ), angles in degrees.
pub fn euler_zyz(angles_deg: [f64; 3]) -> Matrix3<f64> {
    let [a, b, g] = angles_deg.map(f64::to_radians);
    let rz = |t: f64| Rotation3::from_axis_angle(&Vector3::z_axis(), t);
    let ry = Rotation3::from_axis_angle(&Vector3::y_axis(), b);
    (rz(a) * ry * rz(g)).into_inner()
}

fn conjugate(r: &Matrix3<f64>, t: &Matrix3<f64>) -> Matrix3<f64> {
    r * t * r.transpose()
}

/// Conjugates every tensor (g, zero-field, hyperfine) by the rotation.
pub fn rotate_system(sys: &SpinSystem, angles_deg: [f64; 3]) -> SpinSystem {
    rotate_system_by(sys, &euler_zyz(angles_deg))
}

pub fn rotate_system_by(sys: &SpinSystem, r: &Matrix3<f64>) -> SpinSystem {
    let mut out = sys.clone();
    out.g = conjugate(r, &sys.g);
    out.zfs = conjugate(r, &sys.zfs);
    for n in &mut out.nuclei {
        n.a = conjugate(r, &n.a);
    }
    out
}
