//! Line (stick) spectra on a uniform energy lattice, and the lattice that
//! doubles as the discrete Fourier grid of the generating function.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::modes::{bose_occupation, PhononMode};
use crate::error::{Error, Result};
use crate::spectrum::{Grid, Spectrum, SpectrumKind, SpectrumMeta};

/// Largest lattice the automatic sizing will produce.
const MAX_BINS: usize = 1 << 22;

/// Uniform energy lattice `m * bin_mev`, `m ∈ [-n_bins/2, n_bins/2)`.
///
/// Viewed from the time side the lattice is a periodic time grid with window
/// `2π ħ / bin` and step `2π ħ / (n_bins * bin)`; times below are in units
/// of ħ/meV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformGrid {
    pub bin_mev: f64,
    pub n_bins: usize,
}

impl TransformGrid {
    pub fn new(bin_mev: f64, n_bins: usize) -> Result<Self> {
        if !(bin_mev.is_finite() && bin_mev > 0.0) {
            return Err(Error::invalid(format!("bin width must be positive (got {bin_mev})")));
        }
        if n_bins < 8 || !n_bins.is_multiple_of(2) {
            return Err(Error::invalid(format!("bin count must be even and >= 8 (got {n_bins})")));
        }
        Ok(TransformGrid { bin_mev, n_bins })
    }

    /// Sizes the lattice from the mode set: bin = min(γ/20, 0.25 meV), and a
    /// half-span covering the line distribution's mean plus twelve standard
    /// deviations (never less than four times the largest phonon energy).
    pub fn auto(modes: &[PhononMode], temperature_k: f64, gamma_mev: f64) -> Result<Self> {
        if !(gamma_mev.is_finite() && gamma_mev > 0.0) {
            return Err(Error::invalid(format!("gamma must be positive (got {gamma_mev} meV)")));
        }
        let bin = (gamma_mev / 20.0).min(0.25);
        let e_max = modes.iter().map(|m| m.energy_mev).fold(0.0, f64::max);
        let mut mean = 0.0;
        let mut var = 0.0;
        for m in modes {
            let n = bose_occupation(m.energy_mev, temperature_k)?;
            mean += m.hr_factor * m.energy_mev;
            var += m.hr_factor * m.energy_mev * m.energy_mev * (2.0 * n + 1.0);
        }
        let half_span = (4.0 * e_max).max(mean.abs() + 12.0 * var.sqrt() + 6.0 * e_max);
        let needed = (2.0 * half_span / bin).ceil().max(64.0) as usize;
        let n_bins = needed.next_power_of_two();
        if n_bins > MAX_BINS {
            return Err(Error::TransformWindow(format!(
                "{n_bins} bins needed; raise gamma or reduce the coupling"
            )));
        }
        TransformGrid::new(bin, n_bins)
    }

    pub fn half_span_mev(&self) -> f64 {
        0.5 * self.n_bins as f64 * self.bin_mev
    }

    /// Time step of the periodic grid, ħ/meV.
    pub fn time_step(&self) -> f64 {
        2.0 * PI / (self.n_bins as f64 * self.bin_mev)
    }

    /// Length of the periodic time window, ħ/meV.
    pub fn time_window(&self) -> f64 {
        2.0 * PI / self.bin_mev
    }

    /// Enforces Δt ≤ πħ/(4 E_max) and a window of at least 10ħ/γ.
    pub fn check(&self, e_max_mev: f64, gamma_mev: f64) -> Result<()> {
        let dt_max = PI / (4.0 * e_max_mev);
        if self.time_step() > dt_max * (1.0 + 1e-12) {
            return Err(Error::TransformWindow(format!(
                "time step {:.4e} ħ/meV exceeds the aliasing bound {:.4e} for E_max = {e_max_mev} meV",
                self.time_step(),
                dt_max
            )));
        }
        let window_min = 10.0 / gamma_mev;
        if self.time_window() < window_min {
            return Err(Error::TransformWindow(format!(
                "window {:.4e} ħ/meV is shorter than 10ħ/γ = {:.4e} (γ = {gamma_mev} meV)",
                self.time_window(),
                window_min
            )));
        }
        Ok(())
    }

    /// Splits each `(energy, weight)` line linearly over its two neighbouring
    /// non-negative bins, preserving weight and first moment. Returns the
    /// array indexed by bin `k ≥ 0` (length `n_bins`, upper half unused).
    pub(crate) fn bin_positive(&self, lines: impl IntoIterator<Item = (f64, f64)>) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n_bins];
        let limit = self.n_bins / 2 - 1;
        for (e, w) in lines {
            let x = e / self.bin_mev;
            let k = x.floor();
            if k < 0.0 || k as usize >= limit {
                return Err(Error::TransformWindow(format!(
                    "phonon energy {e} meV lies outside the lattice half-span {} meV",
                    self.half_span_mev()
                )));
            }
            let k = k as usize;
            let frac = x - k as f64;
            out[k] += w * (1.0 - frac);
            if frac > 0.0 {
                out[k + 1] += w * frac;
            }
        }
        Ok(out)
    }
}

/// Weights `c_m` of lines at energies `m * bin_mev` (meV).
#[derive(Debug, Clone, PartialEq)]
pub struct LineSpectrum {
    bin_mev: f64,
    first: i64,
    weights: Vec<f64>,
}

impl LineSpectrum {
    pub fn new(bin_mev: f64, first: i64, weights: Vec<f64>) -> Self {
        LineSpectrum {
            bin_mev,
            first,
            weights,
        }
    }

    pub fn bin_mev(&self) -> f64 {
        self.bin_mev
    }

    pub fn first_index(&self) -> i64 {
        self.first
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight of the line at lattice index `m` (zero outside the range).
    pub fn weight(&self, m: i64) -> f64 {
        let i = m - self.first;
        if i < 0 || i as usize >= self.weights.len() {
            0.0
        } else {
            self.weights[i as usize]
        }
    }

    /// `(energy_mev, weight)` for every stored line.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, &w)| ((self.first + i as i64) as f64 * self.bin_mev, w))
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Σ c_m E_m in meV.
    pub fn first_moment_mev(&self) -> f64 {
        self.iter().map(|(e, w)| e * w).sum()
    }

    /// Weight located at |m| > `guard` (used as a wrap-around diagnostic).
    pub(crate) fn weight_beyond(&self, guard: i64) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(i, _)| (self.first + *i as i64).abs() > guard)
            .map(|(_, w)| w.abs())
            .sum()
    }

    /// Largest absolute weight difference to another line spectrum on the
    /// same lattice, and the summed absolute difference.
    pub fn distance(&self, other: &LineSpectrum) -> (f64, f64) {
        let lo = self.first.min(other.first);
        let hi = (self.first + self.weights.len() as i64).max(other.first + other.weights.len() as i64);
        let mut max = 0.0f64;
        let mut sum = 0.0;
        for m in lo..hi {
            let d = (self.weight(m) - other.weight(m)).abs();
            max = max.max(d);
            sum += d;
        }
        (max, sum)
    }

    /// Renders `Σ c_m L_γ(E - E_m)` with Lorentzians of half-width `gamma_mev`
    /// on an eV axis of sideband energies. The result is a density per eV.
    pub fn render_lorentzian(&self, gamma_mev: f64, grid: &Grid) -> Result<Spectrum> {
        if !(gamma_mev.is_finite() && gamma_mev > 0.0) {
            return Err(Error::invalid(format!("gamma must be positive (got {gamma_mev} meV)")));
        }
        let lines: Vec<(f64, f64)> = self.iter().filter(|&(_, w)| w > 1e-18).collect();
        let axis = grid.points();
        let g = gamma_mev;
        let intensity: Vec<f64> = axis
            .par_iter()
            .map(|&x_ev| {
                let x = x_ev * 1e3;
                let sum: f64 = lines
                    .iter()
                    .map(|&(e, w)| {
                        let d = x - e;
                        w * g / (d * d + g * g)
                    })
                    .sum();
                sum / PI * 1e3
            })
            .collect();
        let mut meta = SpectrumMeta::new(SpectrumKind::Lineshape).with_normalization("unit_area");
        meta.set("gamma_meV", g);
        Spectrum::new(axis, intensity, meta)
    }

    /// Weight of the rendered Lorentzians that falls outside `[min, max]`
    /// (eV); used to close the normalization budget on finite grids.
    pub fn lorentzian_weight_outside(&self, gamma_mev: f64, grid: &Grid) -> f64 {
        let (lo, hi) = (grid.min * 1e3, grid.max * 1e3);
        self.iter()
            .map(|(e, w)| {
                let inside = (((hi - e) / gamma_mev).atan() - ((lo - e) / gamma_mev).atan()) / PI;
                w * (1.0 - inside)
            })
            .sum()
    }
}
