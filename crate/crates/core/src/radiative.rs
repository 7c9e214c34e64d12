//! Spontaneous-emission rate of an electric-dipole transition in a medium
//! of refractive index n: Γ = n E³ μ² / (3π ε₀ c³ ħ⁴).

use crate::error::{Error, Result};
use crate::units::{debye_to_coulomb_meter, ev_to_joule, HBAR, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterParams {
    pub e_zpl_ev: f64,
    pub dipole_debye: f64,
    pub refractive_index: f64,
}

impl EmitterParams {
    pub fn new(e_zpl_ev: f64, dipole_debye: f64, refractive_index: f64) -> Result<Self> {
        let p = EmitterParams {
            e_zpl_ev,
            dipole_debye,
            refractive_index,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_zpl_ev.is_finite() && self.e_zpl_ev > 0.0) {
            return Err(Error::invalid(format!("ZPL energy must be positive (got {} eV)", self.e_zpl_ev)));
        }
        if !(self.dipole_debye.is_finite() && self.dipole_debye >= 0.0) {
            return Err(Error::invalid(format!(
                "dipole moment must be non-negative (got {} D)",
                self.dipole_debye
            )));
        }
        if !(self.refractive_index.is_finite() && self.refractive_index >= 1.0) {
            return Err(Error::invalid(format!(
                "refractive index must be at least 1 (got {})",
                self.refractive_index
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiativeRate {
    /// s⁻¹
    pub gamma: f64,
    /// s; infinite for a dark transition.
    pub tau: f64,
}

impl RadiativeRate {
    pub fn tau_us(&self) -> f64 {
        self.tau * 1e6
    }

    pub fn is_dark(&self) -> bool {
        !self.tau.is_finite()
    }
}

pub fn radiative_rate(p: &EmitterParams) -> Result<RadiativeRate> {
    p.validate()?;
    let e = ev_to_joule(p.e_zpl_ev);
    let mu = debye_to_coulomb_meter(p.dipole_debye);
    let gamma = p.refractive_index * e.powi(3) * mu * mu
        / (3.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY * SPEED_OF_LIGHT.powi(3) * HBAR.powi(4));
    let tau = if gamma > 0.0 { 1.0 / gamma } else { f64::INFINITY };
    Ok(RadiativeRate { gamma, tau })
}
