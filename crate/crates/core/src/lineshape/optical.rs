//! Spectral function rendering and the photon-energy weighting of the
//! lineshape into emission and absorption spectra.

use std::f64::consts::PI;

use super::modes::{total_hr, PhononMode};
use crate::error::{Error, Result};
use crate::spectrum::{Grid, Spectrum, SpectrumKind, SpectrumMeta};

pub const DEFAULT_SMEARING_MEV: f64 = 2.0;

/// S(ħω) = Σ S_i δ(ħω - ħω_i) with each δ drawn as a unit Gaussian of
/// standard deviation `smearing_mev`. Axis in eV, density per eV.
///
/// The grid must cover `[0, max ħω_i + 5σ]`; otherwise the weight that does
/// fall on the grid is reported in the error.
pub fn spectral_function(modes: &[PhononMode], grid: &Grid, smearing_mev: f64) -> Result<Spectrum> {
    if !(smearing_mev.is_finite() && smearing_mev > 0.0) {
        return Err(Error::invalid(format!(
            "smearing must be positive (got {smearing_mev} meV)"
        )));
    }
    let s_tot = total_hr(modes)?.total;
    let e_max = modes.iter().map(|m| m.energy_mev).fold(0.0, f64::max);
    let sigma = smearing_mev;
    let (lo, hi) = (grid.min * 1e3, grid.max * 1e3);
    if lo > 0.0 || hi < e_max + 5.0 * sigma {
        let inside: f64 = modes
            .iter()
            .map(|m| m.hr_factor * (normal_cdf((hi - m.energy_mev) / sigma) - normal_cdf((lo - m.energy_mev) / sigma)))
            .sum();
        return Err(Error::TruncatedGrid {
            covered: if s_tot > 0.0 { inside / s_tot } else { 1.0 },
        });
    }
    let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
    let axis = grid.points();
    let intensity = axis
        .iter()
        .map(|&x| {
            let e = x * 1e3;
            modes
                .iter()
                .map(|m| {
                    let z = (e - m.energy_mev) / sigma;
                    m.hr_factor * norm * (-0.5 * z * z).exp()
                })
                .sum::<f64>()
                * 1e3
        })
        .collect();
    let mut meta = SpectrumMeta::new(SpectrumKind::SpectralFunction).with_normalization("S_tot");
    meta.set("S_tot", s_tot);
    meta.set("smearing_meV", sigma);
    Spectrum::new(axis, intensity, meta)
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// I_PL(ħω) = (ħω)³ F(Δ_ZPL - ħω) on a photon-energy axis (eV).
pub fn pl_spectrum(lineshape: &Spectrum, zpl_ev: f64) -> Result<Spectrum> {
    weighted(lineshape, zpl_ev, -1.0, 3, SpectrumKind::Photoluminescence)
}

/// I_A(ħω) = ħω F(ħω - Δ_ZPL): the sideband extends above the ZPL.
pub fn absorption_spectrum(lineshape: &Spectrum, zpl_ev: f64) -> Result<Spectrum> {
    weighted(lineshape, zpl_ev, 1.0, 1, SpectrumKind::Absorption)
}

fn weighted(f: &Spectrum, zpl_ev: f64, sign: f64, power: i32, kind: SpectrumKind) -> Result<Spectrum> {
    if !(zpl_ev.is_finite() && zpl_ev > 0.0) {
        return Err(Error::invalid(format!("ZPL energy must be positive (got {zpl_ev} eV)")));
    }
    let mut pts: Vec<(f64, f64)> = f
        .points()
        .map(|(x, v)| {
            let photon = zpl_ev + sign * x;
            (photon, photon.powi(power) * v)
        })
        .filter(|(photon, _)| *photon > 0.0)
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (axis, intensity) = pts.into_iter().unzip();
    let mut meta = f.meta.clone();
    meta.kind = kind;
    meta.normalization = "none".to_string();
    meta.set("zpl_eV", zpl_ev);
    Spectrum::new(axis, intensity, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lineshape::modes::Symmetry;

    #[test]
    fn single_mode_peak() {
        let modes = [PhononMode::new(0, 100.0, 1.0, Symmetry::A1).unwrap()];
        let grid = Grid::new(0.0, 0.2, 4001).unwrap();
        let s = spectral_function(&modes, &grid, 2.0).unwrap();
        assert!((s.integral() - 1.0).abs() < 1e-6);
        let (x, _) = s.peak().unwrap();
        assert!((x - 0.1).abs() < 1e-9);
    }

    #[test]
    fn duplicate_modes_merge_linearly() {
        let grid = Grid::new(0.0, 0.2, 2001).unwrap();
        let one = [PhononMode::new(0, 80.0, 1.0, Symmetry::E).unwrap()];
        let two = [
            PhononMode::new(0, 80.0, 0.5, Symmetry::E).unwrap(),
            PhononMode::new(1, 80.0, 0.5, Symmetry::E).unwrap(),
        ];
        let a = spectral_function(&one, &grid, 2.0).unwrap();
        let b = spectral_function(&two, &grid, 2.0).unwrap();
        assert!(a.l1_distance(&b).unwrap() < 1e-12);
    }

    #[test]
    fn truncated_grid_reports_coverage() {
        let modes = [PhononMode::new(0, 100.0, 1.0, Symmetry::A1).unwrap()];
        let grid = Grid::new(0.0, 0.1, 1001).unwrap();
        match spectral_function(&modes, &grid, 2.0) {
            Err(Error::TruncatedGrid { covered }) => assert!((covered - 0.5).abs() < 1e-6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zpl_energy_must_be_positive() {
        let meta = SpectrumMeta::new(SpectrumKind::Lineshape);
        let f = Spectrum::new(vec![0.0, 0.1], vec![1.0, 1.0], meta).unwrap();
        assert!(pl_spectrum(&f, 0.0).is_err());
        assert!(absorption_spectrum(&f, -1.0).is_err());
    }
}
