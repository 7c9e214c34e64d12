//! Spin operators and their embedding in tensor-product spaces.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// `[S_x, S_y, S_z]` for spin `two_s / 2` in the basis `m = s, s-1, ..., -s`.
pub fn spin_matrices(two_s: u32) -> [CMatrix; 3] {
    let d = two_s as usize + 1;
    let s = two_s as f64 / 2.0;
    let mut raise = CMatrix::zeros(d, d);
    let mut sz = CMatrix::zeros(d, d);
    for k in 0..d {
        let m = s - k as f64;
        sz[(k, k)] = Complex64::new(m, 0.0);
        if k > 0 {
            raise[(k - 1, k)] = Complex64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let lower = raise.adjoint();
    let sx = (&raise + &lower) * Complex64::new(0.5, 0.0);
    let sy = (&raise - &lower) * Complex64::new(0.0, -0.5);
    [sx, sy, sz]
}

/// Kronecker product over `dims.len()` sites with the given operators placed
/// on their sites and identities elsewhere.
pub fn embed(dims: &[usize], factors: &[(usize, &CMatrix)]) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for (site, &d) in dims.iter().enumerate() {
        out = match factors.iter().find(|(s, _)| *s == site) {
            Some((_, op)) => out.kronecker(op),
            None => out.kronecker(&CMatrix::identity(d, d)),
        };
    }
    out
}

/// Largest |H_ij - conj(H_ji)| relative to the largest |H_ij|.
pub fn hermiticity_defect(h: &CMatrix) -> f64 {
    let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0f64;
    for i in 0..h.nrows() {
        for j in i..h.ncols() {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst / scale
}
