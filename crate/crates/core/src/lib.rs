//! Numerics for optically addressable defect spins.
//!
//! * [`lineshape`]: Huang-Rhys phonon sidebands at any temperature.
//! * [`spin`]: triplet spin Hamiltonians and cw-ODMR spectra with hyperfine
//!   structure.
//! * [`zfs`]: dipolar zero-field-splitting tensors from real-space orbitals.
//! * [`radiative`]: radiative rates from transition dipoles.
//! * [`jahn_teller`]: e⊗E vibronic ground states and Ham reduction factors.
//! * [`io`]: mode tables, spin-system files, CSV and SVG output.

pub mod cli;
pub mod error;
pub mod io;
pub mod jahn_teller;
pub mod lineshape;
pub mod radiative;
pub mod spectrum;
pub mod spin;
pub mod units;
pub mod verify;
pub mod zfs;

pub use error::{Error, Result};
pub use spectrum::{Grid, Spectrum, SpectrumKind, SpectrumMeta};
