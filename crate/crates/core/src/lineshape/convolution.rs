//! Zero-temperature lineshape as a Poisson-weighted sum of self-convolutions
//! of the normalized spectral function.

use super::lines::{LineSpectrum, TransformGrid};
use super::modes::{total_hr, PhononMode};
use crate::error::{Error, Result};

/// Poisson tail weight left out by the default truncation.
pub const DEFAULT_TAIL: f64 = 1e-8;

/// Weight of the Poisson distribution of mean `s` above `n_max`.
pub fn poisson_tail(s: f64, n_max: usize) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    // log-space term at n_max + 1, then sum upward until negligible
    let mut n = n_max + 1;
    let ln_term = -s + n as f64 * s.ln() - ln_factorial(n);
    let mut term = ln_term.exp();
    let mut tail = 0.0;
    loop {
        tail += term;
        n += 1;
        term *= s / n as f64;
        if term < tail * 1e-17 && n as f64 > s || term == 0.0 {
            break;
        }
    }
    tail
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Smallest truncation order whose Poisson tail is below `tail`.
pub fn n_max_for_tail(s_tot: f64, tail: f64) -> usize {
    let mut n = 1;
    while poisson_tail(s_tot, n) >= tail {
        n += 1;
    }
    n
}

/// Result of the recursive convolution.
#[derive(Debug, Clone)]
pub struct ZeroTemperatureLines {
    pub lines: LineSpectrum,
    pub n_max: usize,
    /// e^{-S} Σ_{n≤n_max} S^n/n!
    pub retained_weight: f64,
}

/// F(E, T=0) = e^{-S} Σ_n S^n/n! I_n(E) with I_0 = δ and I_n = I_{n-1} * S(E)/S,
/// evaluated on the lattice of `grid`. The spectral function is binned with
/// the same weight- and moment-preserving split used by the generating
/// function, so both routes see identical line positions.
pub fn zero_temperature_lines(
    modes: &[PhononMode],
    n_max: Option<usize>,
    grid: &TransformGrid,
) -> Result<ZeroTemperatureLines> {
    let s_tot = total_hr(modes)?.total;
    let n_max = match n_max {
        Some(0) => return Err(Error::invalid("n_max must be at least 1")),
        Some(n) => n,
        None => n_max_for_tail(s_tot, DEFAULT_TAIL),
    };
    let half = grid.n_bins / 2;
    let mut result = vec![0.0; half];
    if s_tot == 0.0 {
        result[0] = 1.0;
        return Ok(ZeroTemperatureLines {
            lines: LineSpectrum::new(grid.bin_mev, 0, result),
            n_max,
            retained_weight: 1.0,
        });
    }

    let binned = grid.bin_positive(modes.iter().map(|m| (m.energy_mev, m.hr_factor / s_tot)))?;
    let kernel: Vec<(usize, f64)> = binned
        .iter()
        .enumerate()
        .filter(|(_, &p)| p != 0.0)
        .map(|(k, &p)| (k, p))
        .collect();

    let mut coeff = (-s_tot).exp();
    let mut retained = coeff;
    result[0] = coeff;
    // I_n restricted to the lattice half-span; anything beyond is dropped.
    let mut current = vec![0.0; half];
    current[0] = 1.0;
    let mut support = 1usize;
    for n in 1..=n_max {
        let mut next = vec![0.0; half];
        let mut next_support = 0;
        for (m, &v) in current[..support].iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            for &(k, p) in &kernel {
                let idx = m + k;
                if idx < half {
                    next[idx] += v * p;
                    next_support = next_support.max(idx + 1);
                }
            }
        }
        coeff *= s_tot / n as f64;
        retained += coeff;
        for (r, v) in result.iter_mut().zip(&next[..next_support]) {
            *r += coeff * v;
        }
        current = next;
        support = next_support;
    }

    Ok(ZeroTemperatureLines {
        lines: LineSpectrum::new(grid.bin_mev, 0, result),
        n_max,
        retained_weight: retained,
    })
}
