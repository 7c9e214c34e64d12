//! Spin-spin dipolar zero-field splitting from real-space orbitals.
//!
//! Pair integrals ∫∫ ρ(r₁) f_ab(r₁ − r₂) ρ'(r₂) are evaluated as periodic
//! convolutions: the kernel is tabulated once per grid on minimum-image
//! displacements (zero at the origin) and applied by FFT.

mod fft3;
mod grid;
mod kernel;

pub use grid::{gaussian_orbital, minimum_image, p_orbital, GridOrbital, NORM_TOL};
pub use kernel::{dipolar_constant_mhz_a3, dipolar_kernel, DEFAULT_G};

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use fft3::Fft3;

/// Component order used for the six independent tensor elements.
const COMPONENTS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

/// Symmetric traceless ZFS tensor in MHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZfsTensor {
    pub components: Matrix3<f64>,
}

impl ZfsTensor {
    pub fn zero() -> Self {
        ZfsTensor {
            components: Matrix3::zeros(),
        }
    }

    pub fn new(components: Matrix3<f64>) -> Self {
        ZfsTensor { components }
    }

    /// D = (3/2) D_zz, meaningful in the frame of the symmetry axis.
    pub fn d_scalar(&self) -> f64 {
        1.5 * self.components[(2, 2)]
    }

    pub fn trace(&self) -> f64 {
        self.components.trace()
    }

    pub fn asymmetry(&self) -> f64 {
        (self.components - self.components.transpose()).abs().max()
    }

    /// Axial and rhombic parameters in the principal frame (|D_z| largest,
    /// E ≥ 0).
    pub fn principal_d_e(&self) -> (f64, f64) {
        let mut ev: Vec<f64> = self.components.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        (1.5 * ev[2], 0.5 * (ev[1] - ev[0]).abs())
    }

    pub fn scaled(&self, s: f64) -> Self {
        ZfsTensor::new(self.components * s)
    }

    pub fn max_abs(&self) -> f64 {
        self.components.abs().max()
    }
}

impl std::ops::Add for ZfsTensor {
    type Output = ZfsTensor;
    fn add(self, rhs: ZfsTensor) -> ZfsTensor {
        ZfsTensor::new(self.components + rhs.components)
    }
}

impl std::ops::Sub for ZfsTensor {
    type Output = ZfsTensor;
    fn sub(self, rhs: ZfsTensor) -> ZfsTensor {
        ZfsTensor::new(self.components - rhs.components)
    }
}

/// Fourier-transformed dipolar kernel for one grid, reusable across pairs.
pub struct DipolarKernel {
    cell: Matrix3<f64>,
    dims: [usize; 3],
    fft: Fft3,
    /// FFT of f_ab · dV for each entry of [`COMPONENTS`].
    spectra: Vec<Vec<Complex64>>,
    dv: f64,
    constant: f64,
}

impl DipolarKernel {
    pub fn new(cell: Matrix3<f64>, dims: [usize; 3]) -> Result<Self> {
        DipolarKernel::with_g(cell, dims, DEFAULT_G)
    }

    pub fn with_g(cell: Matrix3<f64>, dims: [usize; 3], g: f64) -> Result<Self> {
        if dims.contains(&0) || cell.determinant().abs() <= 0.0 {
            return Err(Error::invalid("kernel needs a non-empty grid and a non-degenerate cell"));
        }
        let n = dims.iter().product::<usize>();
        let dv = cell.determinant().abs() / n as f64;
        let lattice = cell.transpose();
        // Fractional minimum-image coordinates. A displacement of exactly half
        // the cell has two images; both are kept so the kernel stays even.
        let frac = |i: usize, n: usize| -> Vec<f64> {
            let f = i as f64 / n as f64;
            if 2 * i == n {
                vec![-0.5, 0.5]
            } else if f > 0.5 {
                vec![f - 1.0]
            } else {
                vec![f]
            }
        };
        let fft = Fft3::new(dims);
        let spectra = COMPONENTS
            .par_iter()
            .map(|&(a, b)| {
                let mut data = Vec::with_capacity(n);
                for i in 0..dims[0] {
                    for j in 0..dims[1] {
                        for k in 0..dims[2] {
                            let (fi, fj, fk) = (frac(i, dims[0]), frac(j, dims[1]), frac(k, dims[2]));
                            let mut sum = 0.0;
                            for x in &fi {
                                for y in &fj {
                                    for z in &fk {
                                        sum += dipolar_kernel(&(lattice * Vector3::new(*x, *y, *z)))[(a, b)];
                                    }
                                }
                            }
                            let images = (fi.len() * fj.len() * fk.len()) as f64;
                            data.push(Complex64::new(sum / images * dv, 0.0));
                        }
                    }
                }
                fft.forward(&mut data);
                data
            })
            .collect();
        Ok(DipolarKernel {
            cell,
            dims,
            fft,
            spectra,
            dv,
            constant: dipolar_constant_mhz_a3(g),
        })
    }

    fn check(&self, orb: &GridOrbital) -> Result<()> {
        if orb.dims != self.dims || (orb.cell - self.cell).abs().max() > 1e-9 {
            return Err(Error::GridMismatch(format!("orbital `{}` is not on the kernel grid", orb.label)));
        }
        orb.check_normalized()
    }

    /// C ∫∫ left(r₁) f(r₁ − r₂) right(r₂), in MHz.
    fn integral(&self, left: &[Complex64], right: &[Complex64]) -> Matrix3<f64> {
        let mut fr = right.to_vec();
        self.fft.forward(&mut fr);
        let values: Vec<f64> = self
            .spectra
            .par_iter()
            .map(|spec| {
                let mut conv: Vec<Complex64> = spec.iter().zip(&fr).map(|(k, r)| k * r).collect();
                self.fft.inverse(&mut conv);
                left.iter().zip(&conv).map(|(l, c)| l * c).sum::<Complex64>().re * self.dv
            })
            .collect();
        let mut m = Matrix3::zeros();
        for (&(a, b), v) in COMPONENTS.iter().zip(values) {
            m[(a, b)] = v * self.constant;
            m[(b, a)] = v * self.constant;
        }
        m
    }

    /// Direct term C⟨ψ_iψ_j|f|ψ_iψ_j⟩.
    pub fn direct(&self, a: &GridOrbital, b: &GridOrbital) -> Result<ZfsTensor> {
        self.check(a)?;
        self.check(b)?;
        let ra: Vec<Complex64> = a.values.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
        let rb: Vec<Complex64> = b.values.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
        Ok(ZfsTensor::new(self.integral(&ra, &rb)))
    }

    /// Exchange term C⟨ψ_iψ_j|f|ψ_jψ_i⟩.
    pub fn exchange(&self, a: &GridOrbital, b: &GridOrbital) -> Result<ZfsTensor> {
        self.check(a)?;
        self.check(b)?;
        let rab: Vec<Complex64> = a.values.iter().zip(&b.values).map(|(x, y)| x.conj() * y).collect();
        let rba: Vec<Complex64> = rab.iter().map(|z| z.conj()).collect();
        Ok(ZfsTensor::new(self.integral(&rab, &rba)))
    }

    /// Antisymmetrized same-spin pair: direct minus exchange.
    pub fn pair(&self, a: &GridOrbital, b: &GridOrbital) -> Result<ZfsTensor> {
        Ok(self.direct(a, b)? - self.exchange(a, b)?)
    }
}

/// Same-spin pair tensor of two normalized orbitals on a common grid.
pub fn zfs_pair(a: &GridOrbital, b: &GridOrbital) -> Result<ZfsTensor> {
    if !a.same_grid(b) {
        return Err(Error::GridMismatch(format!("`{}` vs `{}`", a.label, b.label)));
    }
    DipolarKernel::new(a.cell, a.dims)?.pair(a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinLabel {
    Up,
    Down,
}

#[derive(Debug, Clone)]
pub struct SpinOrbital {
    pub orbital: GridOrbital,
    pub spin: SpinLabel,
}

/// Σ over pairs: same-spin pairs give direct − exchange, opposite-spin
/// pairs give −direct. No spin prefactor.
pub fn zfs_sum_unscaled(orbitals: &[SpinOrbital]) -> Result<ZfsTensor> {
    let Some(first) = orbitals.first() else {
        return Ok(ZfsTensor::zero());
    };
    let kernel = DipolarKernel::new(first.orbital.cell, first.orbital.dims)?;
    zfs_sum_with(&kernel, orbitals)
}

pub fn zfs_sum_with(kernel: &DipolarKernel, orbitals: &[SpinOrbital]) -> Result<ZfsTensor> {
    let mut total = ZfsTensor::zero();
    for (i, a) in orbitals.iter().enumerate() {
        for b in &orbitals[i + 1..] {
            total = total
                + if a.spin == b.spin {
                    kernel.pair(&a.orbital, &b.orbital)?
                } else {
                    kernel.direct(&a.orbital, &b.orbital)?.scaled(-1.0)
                };
        }
    }
    Ok(total)
}

/// Pair sum scaled by 1/[S(2S − 1)].
pub fn zfs_sum(orbitals: &[SpinOrbital], total_spin: f64) -> Result<ZfsTensor> {
    let prefactor = total_spin * (2.0 * total_spin - 1.0);
    if prefactor == 0.0 || !prefactor.is_finite() {
        return Err(Error::invalid(format!("S(2S−1) vanishes for S = {total_spin}")));
    }
    Ok(zfs_sum_unscaled(orbitals)?.scaled(1.0 / prefactor))
}

/// Spin decontamination ½(D[↑↑] − D[↑↓]) of a broken-symmetry pair, MHz.
pub fn decontaminate(d_ferro_mhz: f64, d_broken_mhz: f64) -> f64 {
    0.5 * (d_ferro_mhz - d_broken_mhz)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decontamination_values() {
        assert_eq!(decontaminate(2627.0, -4250.0), 3438.5);
        assert_eq!(decontaminate(-564.0, -3579.0), 1507.5);
        assert_eq!(decontaminate(123.4, 123.4), 0.0);
    }

    #[test]
    fn identical_orbitals_cancel() {
        let cell = Matrix3::identity() * 8.0;
        let g = gaussian_orbital("a", cell, [24, 24, 24], Vector3::new(4.0, 4.0, 3.0), 0.6).unwrap();
        let t = zfs_pair(&g, &g).unwrap();
        assert_eq!(t.max_abs(), 0.0);
    }

    #[test]
    fn empty_sum_and_spin_half() {
        assert_eq!(zfs_sum(&[], 1.0).unwrap(), ZfsTensor::zero());
        assert!(zfs_sum(&[], 0.5).is_err());
    }
}
