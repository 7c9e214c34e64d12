use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::units::{mev_to_joule, thermal_energy_mev, ANGSTROM, ATOMIC_MASS, HBAR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symmetry {
    A1,
    E,
    Unknown,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::A1 => "A1",
            Symmetry::E => "E",
            Symmetry::Unknown => "unknown",
        })
    }
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A1" | "a1" => Ok(Symmetry::A1),
            "E" | "e" => Ok(Symmetry::E),
            "" | "unknown" | "?" => Ok(Symmetry::Unknown),
            other => Err(Error::invalid(format!("unknown symmetry label `{other}`"))),
        }
    }
}

/// One vibrational mode: energy in meV and its partial Huang-Rhys factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhononMode {
    pub index: usize,
    pub energy_mev: f64,
    pub hr_factor: f64,
    pub symmetry: Symmetry,
}

impl PhononMode {
    pub fn new(index: usize, energy_mev: f64, hr_factor: f64, symmetry: Symmetry) -> Result<Self> {
        if !(energy_mev.is_finite() && energy_mev > 0.0) {
            return Err(Error::invalid(format!(
                "mode {index}: energy must be positive (got {energy_mev} meV)"
            )));
        }
        if !(hr_factor.is_finite() && hr_factor >= 0.0) {
            return Err(Error::invalid(format!(
                "mode {index}: Huang-Rhys factor must be non-negative (got {hr_factor})"
            )));
        }
        Ok(PhononMode {
            index,
            energy_mev,
            hr_factor,
            symmetry,
        })
    }

    /// Builds a mode from a displacement record instead of a ready-made S.
    pub fn from_displacement(
        index: usize,
        energy_mev: f64,
        displacement: Displacement,
        symmetry: Symmetry,
    ) -> Result<Self> {
        let s = hr_from_displacement(energy_mev, displacement)?;
        PhononMode::new(index, energy_mev, s, symmetry)
    }
}

/// Checks index uniqueness and per-mode invariants for a mode list.
pub fn validate_modes(modes: &[PhononMode]) -> Result<()> {
    if modes.is_empty() {
        return Err(Error::Empty("mode list"));
    }
    let mut seen = BTreeSet::new();
    for m in modes {
        PhononMode::new(m.index, m.energy_mev, m.hr_factor, m.symmetry)?;
        if !seen.insert(m.index) {
            return Err(Error::DuplicateIndex(m.index));
        }
    }
    Ok(())
}

/// The three equivalent ways of specifying the ground/excited displacement
/// of a single mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Displacement {
    /// Mass-weighted displacement in amu^(1/2) Å.
    MassWeighted(f64),
    /// Dimensionless displacement α, half the shift between the two minima.
    Dimensionless(f64),
    /// Generalized force in meV; α = f / ħω.
    Force(f64),
}

/// Raw record as read from a table: exactly one field must be set.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DisplacementRecord {
    pub mode_index: usize,
    pub q: Option<f64>,
    pub alpha: Option<f64>,
    pub force: Option<f64>,
}

impl TryFrom<DisplacementRecord> for Displacement {
    type Error = Error;

    fn try_from(r: DisplacementRecord) -> Result<Self> {
        match (r.q, r.alpha, r.force) {
            (Some(q), None, None) => Ok(Displacement::MassWeighted(q)),
            (None, Some(a), None) => Ok(Displacement::Dimensionless(a)),
            (None, None, Some(f)) => Ok(Displacement::Force(f)),
            (None, None, None) => Err(Error::invalid(format!(
                "mode {}: no displacement representation given",
                r.mode_index
            ))),
            _ => Err(Error::invalid(format!(
                "mode {}: more than one displacement representation given",
                r.mode_index
            ))),
        }
    }
}

/// Dimensionless displacement α from a mass-weighted displacement:
/// 2α = sqrt(ω/ħ) q.
pub fn alpha_from_mass_weighted(energy_mev: f64, q_amu_half_angstrom: f64) -> f64 {
    let omega = mev_to_joule(energy_mev) / HBAR;
    let q_si = q_amu_half_angstrom * ATOMIC_MASS.sqrt() * ANGSTROM;
    0.5 * (omega / HBAR).sqrt() * q_si
}

/// Partial Huang-Rhys factor S = 2α² of one mode.
pub fn hr_from_displacement(energy_mev: f64, displacement: Displacement) -> Result<f64> {
    if !(energy_mev.is_finite() && energy_mev > 0.0) {
        return Err(Error::invalid(format!(
            "mode energy must be positive (got {energy_mev} meV)"
        )));
    }
    let alpha = match displacement {
        Displacement::MassWeighted(q) => alpha_from_mass_weighted(energy_mev, q),
        Displacement::Dimensionless(a) => a,
        Displacement::Force(f) => f / energy_mev,
    };
    if !alpha.is_finite() {
        return Err(Error::invalid("non-finite displacement"));
    }
    Ok(2.0 * alpha * alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HrTotals {
    pub total: f64,
    pub a1: f64,
    pub e: f64,
}

/// Total and symmetry-resolved Huang-Rhys factors. Unlabelled modes enter
/// the total only; the two partial sums are never forced to match it.
pub fn total_hr(modes: &[PhononMode]) -> Result<HrTotals> {
    if modes.is_empty() {
        return Err(Error::Empty("mode list"));
    }
    let mut t = HrTotals {
        total: 0.0,
        a1: 0.0,
        e: 0.0,
    };
    for m in modes {
        t.total += m.hr_factor;
        match m.symmetry {
            Symmetry::A1 => t.a1 += m.hr_factor,
            Symmetry::E => t.e += m.hr_factor,
            Symmetry::Unknown => {}
        }
    }
    Ok(t)
}

/// S-weighted mean phonon energy ħ⟨ω⟩ in meV.
pub fn mean_phonon_energy(modes: &[PhononMode]) -> Result<f64> {
    let s_tot = total_hr(modes)?.total;
    if s_tot <= 0.0 {
        return Err(Error::invalid("mean phonon energy undefined for S_tot = 0"));
    }
    let first: f64 = modes.iter().map(|m| m.hr_factor * m.energy_mev).sum();
    Ok(first / s_tot)
}

/// Bose-Einstein occupation of a mode; exactly zero at T = 0.
pub fn bose_occupation(energy_mev: f64, temperature_k: f64) -> Result<f64> {
    if !(energy_mev.is_finite() && energy_mev > 0.0) {
        return Err(Error::invalid(format!(
            "phonon energy must be positive (got {energy_mev} meV)"
        )));
    }
    if !(temperature_k.is_finite() && temperature_k >= 0.0) {
        return Err(Error::invalid(format!(
            "temperature must be non-negative (got {temperature_k} K)"
        )));
    }
    if temperature_k == 0.0 {
        return Ok(0.0);
    }
    let x = energy_mev / thermal_energy_mev(temperature_k);
    Ok(1.0 / x.exp_m1())
}

/// Stokes shift 2 Σ S_i ħω_i in meV.
pub fn stokes_shift(modes: &[PhononMode]) -> Result<f64> {
    if modes.is_empty() {
        return Err(Error::Empty("mode list"));
    }
    Ok(2.0 * modes.iter().map(|m| m.hr_factor * m.energy_mev).sum::<f64>())
}

/// Debye-Waller (zero-phonon) weight exp(-Σ S_i (2 n_i + 1)).
pub fn zpl_weight(modes: &[PhononMode], temperature_k: f64) -> Result<f64> {
    let mut exponent = 0.0;
    for m in modes {
        let n = bose_occupation(m.energy_mev, temperature_k)?;
        exponent += m.hr_factor * (2.0 * n + 1.0);
    }
    Ok((-exponent).exp())
}
