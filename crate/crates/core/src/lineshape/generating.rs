//! Finite-temperature lineshape through the generating function
//! G(t) = exp(S(t) - S(0)).
//!
//! S(t) = Σ_i S_i [n_i e^{+iω_i t} + (n_i + 1) e^{-iω_i t}], so the line
//! weights are the Fourier coefficients of G on a periodic time grid. The
//! phenomenological e^{-γ|t|} damping is applied afterwards as an exact
//! Lorentzian convolution of the lines.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::lines::{LineSpectrum, TransformGrid};
use super::modes::{bose_occupation, PhononMode};
use crate::error::{Error, Result};

/// Fraction of the line weight allowed in the outer sixteenth of the lattice
/// before the window is declared too short.
pub const MAX_LEAKAGE: f64 = 1e-3;

/// Line weights of F(E, T) on the lattice of `grid`, from the discrete
/// Fourier transform of the generating function.
pub fn thermal_lines(
    modes: &[PhononMode],
    temperature_k: f64,
    grid: &TransformGrid,
) -> Result<LineSpectrum> {
    if modes.is_empty() {
        return Err(Error::Empty("mode list"));
    }
    let n = grid.n_bins;
    let mut emission = Vec::with_capacity(modes.len());
    let mut absorption = Vec::with_capacity(modes.len());
    for m in modes {
        let occ = bose_occupation(m.energy_mev, temperature_k)?;
        emission.push((m.energy_mev, m.hr_factor * (occ + 1.0)));
        absorption.push((m.energy_mev, m.hr_factor * occ));
    }
    let emit = grid.bin_positive(emission)?;
    let absorb = grid.bin_positive(absorption)?;
    let s0: f64 = emit.iter().sum::<f64>() + absorb.iter().sum::<f64>();

    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);

    // Σ_k s_k e^{-2πi kj/N}  and  Σ_k s_k e^{+2πi kj/N}
    let mut s_emit: Vec<Complex64> = emit.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut s_abs: Vec<Complex64> = absorb.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward.process(&mut s_emit);
    inverse.process(&mut s_abs);

    let mut g: Vec<Complex64> = s_emit
        .iter()
        .zip(&s_abs)
        .map(|(a, b)| (a + b - s0).exp())
        .collect();
    // c_m = (1/N) Σ_j G_j e^{+2πi mj/N}
    inverse.process(&mut g);
    let scale = 1.0 / n as f64;

    let half = n / 2;
    let mut weights = Vec::with_capacity(n);
    // m = -N/2 .. N/2-1 maps to FFT index (m mod N)
    for idx in (half..n).chain(0..half) {
        let c = g[idx].re * scale;
        weights.push(if c < 0.0 { 0.0 } else { c });
    }
    let lines = LineSpectrum::new(grid.bin_mev, -(half as i64), weights);

    let guard = (7 * n / 16) as i64;
    let leaked = lines.weight_beyond(guard) / lines.total_weight().max(f64::MIN_POSITIVE);
    if leaked > MAX_LEAKAGE {
        return Err(Error::TransformWindow(format!(
            "{leaked:.3e} of the line weight sits at the lattice edge; enlarge the window"
        )));
    }
    Ok(lines)
}

/// Continuous generating function at time `tau` (units of ħ/meV), with the
/// δ-lines of the spectral function optionally replaced by Gaussians of
/// standard deviation `smearing_mev`.
pub fn generating_function(
    modes: &[PhononMode],
    temperature_k: f64,
    smearing_mev: f64,
    tau: f64,
) -> Result<Complex64> {
    let damping = (-0.5 * smearing_mev * smearing_mev * tau * tau).exp();
    let mut s_t = Complex64::new(0.0, 0.0);
    let mut s_0 = 0.0;
    for m in modes {
        let n = bose_occupation(m.energy_mev, temperature_k)?;
        let phase = Complex64::from_polar(1.0, m.energy_mev * tau);
        s_t += m.hr_factor * (n * phase + (n + 1.0) * phase.conj()) * damping;
        s_0 += m.hr_factor * (2.0 * n + 1.0);
    }
    Ok((s_t - s_0).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lineshape::modes::{zpl_weight, Symmetry};

    #[test]
    fn single_mode_zero_temperature_is_poisson() {
        let modes = [PhononMode::new(0, 25.0, 1.7, Symmetry::E).unwrap()];
        let grid = TransformGrid::new(0.5, 2048).unwrap();
        let lines = thermal_lines(&modes, 0.0, &grid).unwrap();
        let mut p = (-1.7f64).exp();
        for n in 0..20 {
            if n > 0 {
                p *= 1.7 / n as f64;
            }
            assert!((lines.weight(50 * n) - p).abs() < 1e-12, "n = {n}");
        }
        assert!((lines.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weight_is_conserved_at_high_temperature() {
        let modes = [
            PhononMode::new(0, 12.0, 2.0, Symmetry::E).unwrap(),
            PhononMode::new(1, 70.0, 0.4, Symmetry::A1).unwrap(),
        ];
        let grid = TransformGrid::auto(&modes, 600.0, 5.0).unwrap();
        let lines = thermal_lines(&modes, 600.0, &grid).unwrap();
        assert!((lines.total_weight() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn too_small_window_is_reported() {
        let modes = [PhononMode::new(0, 20.0, 4.0, Symmetry::E).unwrap()];
        let grid = TransformGrid::new(1.0, 64).unwrap();
        assert!(matches!(
            thermal_lines(&modes, 300.0, &grid),
            Err(Error::TransformWindow(_))
        ));
    }

    #[test]
    fn long_time_limit_is_debye_waller() {
        let modes = [
            PhononMode::new(0, 18.0, 1.5, Symmetry::E).unwrap(),
            PhononMode::new(1, 45.0, 0.8, Symmetry::A1).unwrap(),
        ];
        for t in [0.0, 4.0, 300.0] {
            let g = generating_function(&modes, t, 2.0, 25.0).unwrap();
            let dw = zpl_weight(&modes, t).unwrap();
            assert!((g.re - dw).abs() < 1e-6 && g.im.abs() < 1e-6, "T = {t}");
        }
        let g0 = generating_function(&modes, 300.0, 2.0, 0.0).unwrap();
        assert!((g0.re - 1.0).abs() < 1e-15);
    }
}
