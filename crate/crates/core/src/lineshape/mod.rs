//! Huang-Rhys phonon-sideband lineshapes.
//!
//! Two independent routes produce the same line spectrum: the
//! zero-temperature recursive convolution ([`zero_temperature_lines`]) and
//! the generating-function transform valid at any temperature
//! ([`thermal_lines`]). Both work on a shared [`TransformGrid`] lattice;
//! [`LineSpectrum::render_lorentzian`] applies the ZPL broadening γ.

mod convolution;
mod generating;
mod lines;
mod modes;
mod optical;

pub use convolution::{n_max_for_tail, poisson_tail, zero_temperature_lines, ZeroTemperatureLines, DEFAULT_TAIL};
pub use generating::{generating_function, thermal_lines, MAX_LEAKAGE};
pub use lines::{LineSpectrum, TransformGrid};
pub use modes::{
    alpha_from_mass_weighted, bose_occupation, hr_from_displacement, mean_phonon_energy, stokes_shift,
    total_hr, validate_modes, zpl_weight, Displacement, DisplacementRecord, HrTotals, PhononMode, Symmetry,
};
pub use optical::{absorption_spectrum, pl_spectrum, spectral_function, DEFAULT_SMEARING_MEV};

use crate::error::{Error, Result};
use crate::spectrum::{Grid, Spectrum};
use crate::verify::Check;

/// Default ZPL half-width, meV.
pub const DEFAULT_GAMMA_MEV: f64 = 5.0;

fn e_max(modes: &[PhononMode]) -> f64 {
    modes.iter().map(|m| m.energy_mev).fold(0.0, f64::max)
}

/// T = 0 lineshape from the recursive convolution, Lorentzian-broadened
/// with half-width `gamma_mev` on a sideband-energy grid (eV).
///
/// `n_max = None` picks the order whose Poisson tail is below 1e-8. When the
/// retained weight drops under 0.99 the metadata carries `truncated = true`.
pub fn lineshape_t0(modes: &[PhononMode], n_max: Option<usize>, gamma_mev: f64, grid: &Grid) -> Result<Spectrum> {
    validate_modes(modes)?;
    let lattice = TransformGrid::auto(modes, 0.0, gamma_mev)?;
    let r = zero_temperature_lines(modes, n_max, &lattice)?;
    let mut s = r.lines.render_lorentzian(gamma_mev, grid)?;
    s.meta.temperature_k = Some(0.0);
    s.meta.set("S_tot", total_hr(modes)?.total);
    s.meta.set("n_max", r.n_max);
    s.meta.set("retained_weight", r.retained_weight);
    s.meta.set("truncated", r.retained_weight < 0.99);
    Ok(s)
}

/// Lineshape at temperature `temperature_k` from the generating function,
/// Lorentzian-broadened with half-width `gamma_mev`.
pub fn lineshape_generating(modes: &[PhononMode], temperature_k: f64, gamma_mev: f64, grid: &Grid) -> Result<Spectrum> {
    validate_modes(modes)?;
    let lattice = TransformGrid::auto(modes, temperature_k, gamma_mev)?;
    lattice.check(e_max(modes), gamma_mev)?;
    let lines = thermal_lines(modes, temperature_k, &lattice)?;
    let mut s = lines.render_lorentzian(gamma_mev, grid)?;
    s.meta.temperature_k = Some(temperature_k);
    s.meta.set("S_tot", total_hr(modes)?.total);
    Ok(s)
}

/// Everything needed to turn a mode table into optical spectra.
#[derive(Debug, Clone)]
pub struct LineshapeJob {
    pub zpl_energy_ev: f64,
    pub temperature_k: f64,
    pub gamma_mev: f64,
    /// Sideband-energy grid (eV) on which F is sampled.
    pub grid: Grid,
    pub spectral_smearing_mev: f64,
}

#[derive(Debug, Clone)]
pub struct LineshapeOutput {
    pub lineshape: Spectrum,
    pub photoluminescence: Spectrum,
    pub absorption: Spectrum,
    pub spectral_function: Spectrum,
}

impl LineshapeJob {
    pub fn validate(&self) -> Result<()> {
        if !(self.zpl_energy_ev.is_finite() && self.zpl_energy_ev > 0.0) {
            return Err(Error::invalid("ZPL energy must be positive"));
        }
        if !(self.temperature_k.is_finite() && self.temperature_k >= 0.0) {
            return Err(Error::invalid("temperature must be non-negative"));
        }
        if !(self.gamma_mev.is_finite() && self.gamma_mev > 0.0) {
            return Err(Error::invalid("gamma must be positive"));
        }
        Ok(())
    }

    pub fn run(&self, modes: &[PhononMode]) -> Result<LineshapeOutput> {
        self.validate()?;
        let lineshape = lineshape_generating(modes, self.temperature_k, self.gamma_mev, &self.grid)?;
        let photoluminescence = pl_spectrum(&lineshape, self.zpl_energy_ev)?;
        let absorption = absorption_spectrum(&lineshape, self.zpl_energy_ev)?;
        let sigma = self.spectral_smearing_mev;
        let top = (e_max(modes) + 10.0 * sigma) * 1e-3;
        let n = ((top / (0.25 * sigma * 1e-3)).ceil() as usize + 1).max(2);
        let spectral_function = spectral_function(modes, &Grid::new(0.0, top, n)?, sigma)?;
        Ok(LineshapeOutput {
            lineshape,
            photoluminescence,
            absorption,
            spectral_function,
        })
    }

    /// Invariant checks on the job's own mode set: weight conservation of
    /// the transform, convolution/transform agreement at T = 0, the first
    /// moment identity and the Stokes identity.
    pub fn verify(&self, modes: &[PhononMode]) -> Result<Vec<Check>> {
        self.validate()?;
        validate_modes(modes)?;
        let mut checks = Vec::new();
        let lattice = TransformGrid::auto(modes, self.temperature_k, self.gamma_mev)?;
        let lines = thermal_lines(modes, self.temperature_k, &lattice)?;
        let w = lines.total_weight();
        checks.push(Check::new("normalization", (w - 1.0).abs() < 1e-4, format!("Σ weights = {w:.12}")));

        let lattice0 = TransformGrid::auto(modes, 0.0, self.gamma_mev)?;
        let conv = zero_temperature_lines(modes, Some(n_max_for_tail(total_hr(modes)?.total, 1e-15)), &lattice0)?;
        let gen = thermal_lines(modes, 0.0, &lattice0)?;
        let (_, l1) = conv.lines.distance(&gen);
        checks.push(Check::new("convolution_vs_transform", l1 < 1e-6, format!("Σ|Δc| = {l1:.3e}")));

        let first: f64 = modes.iter().map(|m| m.hr_factor * m.energy_mev).sum();
        let moment = conv.lines.first_moment_mev();
        let rel = if first > 0.0 { (moment - first).abs() / first } else { moment.abs() };
        checks.push(Check::new("first_moment", rel < 1e-8, format!("moment {moment:.9} vs Σ S ħω {first:.9} meV")));

        let stokes = stokes_shift(modes)?;
        let s_tot = total_hr(modes)?.total;
        let ok = if s_tot > 0.0 {
            let alt = 2.0 * s_tot * mean_phonon_energy(modes)?;
            (stokes - alt).abs() <= 1e-12 * stokes.abs().max(1.0)
        } else {
            stokes == 0.0
        };
        checks.push(Check::new("stokes_identity", ok, format!("E_Stokes = {stokes:.6} meV")));
        Ok(checks)
    }
}
