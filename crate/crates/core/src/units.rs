//! Physical constants (CODATA 2018) and unit conversions.
//!
//! Everything that crosses a module boundary in a "lab" unit (meV, eV, MHz,
//! mT, Debye, Å) is converted here, so formulas elsewhere can stay in SI or
//! in one consistent working unit.

/// Planck constant, J s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Vacuum permeability, N/A^2.
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;
/// Bohr magneton, J/T.
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
/// Nuclear magneton, J/T.
pub const NUCLEAR_MAGNETON: f64 = 5.050_783_746_1e-27;
/// Atomic mass constant, kg.
pub const ATOMIC_MASS: f64 = 1.660_539_066_60e-27;
/// Free-electron g factor (magnitude).
pub const G_ELECTRON: f64 = 2.002_319_304_362_56;
/// One Debye in C m (1e-21 / c).
pub const DEBYE: f64 = 1e-21 / SPEED_OF_LIGHT;
/// One Ångström in m.
pub const ANGSTROM: f64 = 1e-10;

/// Boltzmann constant in meV/K.
pub const BOLTZMANN_MEV_PER_K: f64 = BOLTZMANN / ELEMENTARY_CHARGE * 1e3;

/// Bohr magneton over h, MHz/mT.
pub const BOHR_MHZ_PER_MT: f64 = BOHR_MAGNETON / PLANCK * 1e-9;
/// Nuclear magneton over h, MHz/mT.
pub const NUCLEAR_MHZ_PER_MT: f64 = NUCLEAR_MAGNETON / PLANCK * 1e-9;

pub fn ev_to_joule(ev: f64) -> f64 {
    ev * ELEMENTARY_CHARGE
}

pub fn mev_to_joule(mev: f64) -> f64 {
    mev * ELEMENTARY_CHARGE * 1e-3
}

pub fn debye_to_coulomb_meter(debye: f64) -> f64 {
    debye * DEBYE
}

pub fn coulomb_meter_to_debye(cm: f64) -> f64 {
    cm / DEBYE
}

/// Thermal energy k_B T in meV.
pub fn thermal_energy_mev(temperature_k: f64) -> f64 {
    BOLTZMANN_MEV_PER_K * temperature_k
}

/// Thermal energy k_B T expressed as a frequency, MHz.
pub fn thermal_energy_mhz(temperature_k: f64) -> f64 {
    BOLTZMANN * temperature_k / PLANCK * 1e-6
}

/// Photon energy (eV) to vacuum wavelength (nm).
pub fn ev_to_nm(ev: f64) -> f64 {
    PLANCK * SPEED_OF_LIGHT / ev_to_joule(ev) * 1e9
}
