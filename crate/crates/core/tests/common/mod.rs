//! Shared oracles and fixtures for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use defectoscope::lineshape::{PhononMode, Symmetry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Vibrational quanta kept in the brute-force Franck-Condon sums.
pub const FC_QUANTA: usize = 60;

const K_B_MEV_PER_K: f64 = 8.617_333_262e-2;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// Overlaps ⟨m|D(λ)|n⟩ between ground-state level m and a displaced level n,
/// with λ² = S, built from the two-term ladder recurrences
///   √(m+1) M[m+1][n] = √n M[m][n-1] + λ M[m][n]
///   √(n+1) M[m][n+1] = √m M[m-1][n] - λ M[m][n].
pub fn franck_condon(s: f64, quanta: usize) -> Vec<Vec<f64>> {
    let lambda = s.sqrt();
    let size = quanta + 1;
    let mut m = vec![vec![0.0; size]; size];
    m[0][0] = (-0.5 * s).exp();
    for n in 0..quanta {
        m[0][n + 1] = -lambda * m[0][n] / ((n + 1) as f64).sqrt();
    }
    for row in 0..quanta {
        for n in 0..size {
            let down = if n > 0 { (n as f64).sqrt() * m[row][n - 1] } else { 0.0 };
            m[row + 1][n] = (down + lambda * m[row][n]) / ((row + 1) as f64).sqrt();
        }
    }
    m
}

/// Emission weights of one mode indexed by the net number of quanta created
/// (final minus initial), with Boltzmann-weighted initial levels.
pub fn thermal_fc_single(s: f64, energy_mev: f64, temperature_k: f64) -> BTreeMap<i64, f64> {
    let fc = franck_condon(s, FC_QUANTA);
    let x = if temperature_k > 0.0 {
        (-energy_mev / (K_B_MEV_PER_K * temperature_k)).exp()
    } else {
        0.0
    };
    let mut out = BTreeMap::new();
    for n in 0..=FC_QUANTA {
        let p = (1.0 - x) * x.powi(n as i32);
        if p == 0.0 {
            continue;
        }
        for (m, row) in fc.iter().enumerate() {
            let w = row[n] * row[n];
            *out.entry(m as i64 - n as i64).or_insert(0.0) += p * w;
        }
    }
    out
}

/// Brute-force thermal lineshape on a lattice of width `bin_mev`. Mode
/// energies must be integer multiples of the bin.
pub fn thermal_fc_lines(modes: &[PhononMode], temperature_k: f64, bin_mev: f64) -> BTreeMap<i64, f64> {
    let mut total: BTreeMap<i64, f64> = BTreeMap::from([(0, 1.0)]);
    for mode in modes {
        let step = (mode.energy_mev / bin_mev).round() as i64;
        assert!(
            (step as f64 * bin_mev - mode.energy_mev).abs() < 1e-9,
            "mode energy must sit on the lattice"
        );
        let single = thermal_fc_single(mode.hr_factor, mode.energy_mev, temperature_k);
        let mut next = BTreeMap::new();
        for (&a, &wa) in &total {
            for (&k, &wk) in &single {
                *next.entry(a + k * step).or_insert(0.0) += wa * wk;
            }
        }
        total = next;
    }
    total
}

/// `n` modes with lattice-commensurate energies in [5, 120] meV (quarter-meV
/// steps) and Huang-Rhys factors summing to `s_tot`.
pub fn random_modes(seed: u64, n: usize, s_tot: f64) -> Vec<PhononMode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter()
        .enumerate()
        .map(|(i, w)| {
            let energy = rng.random_range(20..480) as f64 * 0.25;
            let sym = if rng.random_bool(0.5) { Symmetry::E } else { Symmetry::A1 };
            PhononMode::new(i, energy, s_tot * w / sum, sym).unwrap()
        })
        .collect()
}

pub fn mode(index: usize, energy_mev: f64, s: f64) -> PhononMode {
    PhononMode::new(index, energy_mev, s, Symmetry::Unknown).unwrap()
}
