//! Spin systems: electron spin, g and zero-field tensors, nuclei, sweeps.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Tolerance on asymmetry of an input hyperfine or ZFS tensor, MHz.
pub const SYMMETRY_TOL_MHZ: f64 = 1e-6;

/// (symbol, 2I, g_n)
const ISOTOPES: &[(&str, u32, f64)] = &[
    ("1H", 1, 5.585_694_70),
    ("2H", 2, 0.857_438_23),
    ("10B", 6, 0.600_215),
    ("11B", 3, 1.792_433),
    ("13C", 1, 1.404_824),
    ("14N", 2, 0.403_761),
    ("15N", 1, -0.566_378),
    ("29Si", 1, -1.110_58),
];

/// Nuclear spin (as 2I) and g-factor of a tabulated isotope.
pub fn isotope_data(isotope: &str) -> Option<(u32, f64)> {
    ISOTOPES
        .iter()
        .find(|(sym, _, _)| sym.eq_ignore_ascii_case(isotope.trim()))
        .map(|&(_, two_i, g)| (two_i, g))
}

fn symmetrized(name: &str, a: Matrix3<f64>) -> Result<Matrix3<f64>> {
    if !a.iter().all(|v| v.is_finite()) {
        return Err(Error::invalid(format!("{name} tensor has non-finite entries")));
    }
    let asym = (a - a.transpose()).abs().max();
    if asym > SYMMETRY_TOL_MHZ {
        return Err(Error::invalid(format!(
            "{name} tensor is not symmetric (largest |A_ab - A_ba| = {asym:.3e} MHz)"
        )));
    }
    Ok((a + a.transpose()) * 0.5)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NucleusSpec {
    pub isotope: String,
    /// Twice the nuclear spin.
    pub two_i: u32,
    pub g_n: f64,
    /// Hyperfine tensor, MHz.
    pub a: Matrix3<f64>,
    /// Treated exactly (true) or by first-order shifts (false).
    pub core: bool,
}

impl NucleusSpec {
    pub fn new(isotope: impl Into<String>, two_i: u32, g_n: f64, a: Matrix3<f64>, core: bool) -> Result<Self> {
        let isotope = isotope.into();
        if two_i == 0 {
            return Err(Error::invalid(format!("nucleus {isotope} has zero spin")));
        }
        if !g_n.is_finite() {
            return Err(Error::invalid(format!("nucleus {isotope} has a non-finite g_n")));
        }
        let a = symmetrized(&format!("hyperfine ({isotope})"), a)?;
        Ok(NucleusSpec {
            isotope,
            two_i,
            g_n,
            a,
            core,
        })
    }

    /// Looks the spin and g-factor up in the built-in isotope table.
    pub fn from_isotope(isotope: &str, a: Matrix3<f64>, core: bool) -> Result<Self> {
        let (two_i, g_n) =
            isotope_data(isotope).ok_or_else(|| Error::invalid(format!("unknown isotope `{isotope}`")))?;
        NucleusSpec::new(isotope.trim(), two_i, g_n, a, core)
    }

    /// Tensor from the four published components; xz = yz = 0.
    pub fn tensor_from_xx_yy_zz_xy(xx: f64, yy: f64, zz: f64, xy: f64) -> Matrix3<f64> {
        Matrix3::new(xx, xy, 0.0, xy, yy, 0.0, 0.0, 0.0, zz)
    }

    pub fn spin(&self) -> f64 {
        self.two_i as f64 / 2.0
    }

    pub fn multiplicity(&self) -> usize {
        self.two_i as usize + 1
    }
}

/// Zero-field tensor diag(-D/3 + E, -D/3 - E, 2D/3) in MHz.
pub fn zfs_tensor(d_mhz: f64, e_mhz: f64) -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(-d_mhz / 3.0 + e_mhz, -d_mhz / 3.0 - e_mhz, 2.0 * d_mhz / 3.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    /// Twice the electron spin.
    pub two_s: u32,
    pub g: Matrix3<f64>,
    /// Traceless symmetric zero-field tensor, MHz.
    pub zfs: Matrix3<f64>,
    pub nuclei: Vec<NucleusSpec>,
    /// Gaussian FWHM contributions along x, y, z, MHz.
    pub h_strain: [f64; 3],
}

impl SpinSystem {
    /// Spin `two_s/2` with isotropic g and axial/rhombic parameters D, E.
    pub fn with_d_e(two_s: u32, g: f64, d_mhz: f64, e_mhz: f64) -> Result<Self> {
        if e_mhz.abs() > d_mhz.abs() / 3.0 + 1e-12 {
            return Err(Error::invalid(format!("|E| = {} exceeds |D|/3 = {}", e_mhz.abs(), d_mhz.abs() / 3.0)));
        }
        SpinSystem::with_tensor(two_s, Matrix3::identity() * g, zfs_tensor(d_mhz, e_mhz))
    }

    pub fn with_tensor(two_s: u32, g: Matrix3<f64>, zfs: Matrix3<f64>) -> Result<Self> {
        if two_s == 0 {
            return Err(Error::invalid("electron spin must be positive"));
        }
        let zfs = symmetrized("zero-field", zfs)?;
        if zfs.trace().abs() > SYMMETRY_TOL_MHZ {
            return Err(Error::invalid(format!("zero-field tensor has trace {:.3e} MHz", zfs.trace())));
        }
        if !g.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("g tensor has non-finite entries"));
        }
        Ok(SpinSystem {
            two_s,
            g,
            zfs,
            nuclei: Vec::new(),
            h_strain: [0.0; 3],
        })
    }

    pub fn with_nuclei(mut self, nuclei: Vec<NucleusSpec>) -> Self {
        self.nuclei = nuclei;
        self
    }

    pub fn with_h_strain(mut self, h_strain: [f64; 3]) -> Result<Self> {
        if h_strain.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid("HStrain components must be non-negative"));
        }
        self.h_strain = h_strain;
        Ok(self)
    }

    /// Axial and rhombic parameters of the zero-field tensor in its
    /// principal frame, ordered so that |D_z| is largest and E ≥ 0.
    pub fn d_e(&self) -> (f64, f64) {
        let mut ev: Vec<f64> = self.zfs.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        let d = 1.5 * ev[2];
        let e = 0.5 * (ev[1] - ev[0]).abs();
        (d, e)
    }

    pub fn core_nuclei(&self) -> impl Iterator<Item = &NucleusSpec> {
        self.nuclei.iter().filter(|n| n.core)
    }

    pub fn perturbative_nuclei(&self) -> impl Iterator<Item = &NucleusSpec> {
        self.nuclei.iter().filter(|n| !n.core)
    }

    pub fn electron_multiplicity(&self) -> usize {
        self.two_s as usize + 1
    }
}

/// Field, frequency window and sample orientation of a cw sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub b_mt: Vector3<f64>,
    pub range_ghz: (f64, f64),
    pub n_points: usize,
    /// Population weighting temperature; `None` uses bare matrix elements.
    pub temperature_k: Option<f64>,
    /// ZYZ Euler angles of the sample, degrees.
    pub euler_deg: [f64; 3],
}

impl SweepSpec {
    pub fn new(b_mt: Vector3<f64>, range_ghz: (f64, f64), n_points: usize) -> Result<Self> {
        let s = SweepSpec {
            b_mt,
            range_ghz,
            n_points,
            temperature_k: None,
            euler_deg: [0.0; 3],
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_temperature(mut self, t: f64) -> Result<Self> {
        self.temperature_k = Some(t);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.range_ghz;
        if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi) {
            return Err(Error::invalid(format!("frequency range [{lo}, {hi}] GHz is empty or invalid")));
        }
        if self.n_points < 2 {
            return Err(Error::invalid("a sweep needs at least 2 points"));
        }
        if !self.b_mt.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("field has non-finite components"));
        }
        if let Some(t) = self.temperature_k {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::invalid("temperature must be non-negative"));
            }
        }
        Ok(())
    }

    pub fn range_mhz(&self) -> (f64, f64) {
        (self.range_ghz.0 * 1e3, self.range_ghz.1 * 1e3)
    }

    /// Field direction, or z when the field vanishes.
    pub fn quantization_axis(&self) -> Vector3<f64> {
        quantization_axis(&self.b_mt)
    }
}

pub fn quantization_axis(b: &Vector3<f64>) -> Vector3<f64> {
    let n = b.norm();
    if n > 0.0 {
        b / n
    } else {
        Vector3::z()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_row_gives_symmetric_tensor() {
        let a = NucleusSpec::tensor_from_xx_yy_zz_xy(80.566, 57.865, 48.304, 19.670);
        let n = NucleusSpec::from_isotope("14N", a, true).unwrap();
        assert_eq!(n.a[(0, 1)], 19.670);
        assert_eq!(n.a[(1, 0)], 19.670);
        assert_eq!(n.a[(0, 2)], 0.0);
        assert_eq!(n.two_i, 2);
    }

    #[test]
    fn asymmetric_tensor_rejected() {
        let a = Matrix3::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(NucleusSpec::from_isotope("11B", a, false).is_err());
    }

    #[test]
    fn zfs_parameters_round_trip() {
        let s = SpinSystem::with_d_e(2, 2.0, 3450.0, 10.0).unwrap();
        let (d, e) = s.d_e();
        assert!((d - 3450.0).abs() < 1e-9 && (e - 10.0).abs() < 1e-9);
        assert!(SpinSystem::with_d_e(2, 2.0, 300.0, 101.0).is_err());
    }

    #[test]
    fn sweep_validation() {
        assert!(SweepSpec::new(Vector3::zeros(), (4.0, 3.0), 100).is_err());
        assert!(SweepSpec::new(Vector3::zeros(), (3.0, 4.0), 1).is_err());
        assert!(SweepSpec::new(Vector3::zeros(), (3.0, 4.0), 2).is_ok());
    }
}
