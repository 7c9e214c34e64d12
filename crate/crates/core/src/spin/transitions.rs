//! Allowed magnetic-dipole transitions between eigenstates.

use nalgebra::Vector3;
use num_complex::Complex64;

use super::hamiltonian::{EigenSystem, SpinHamiltonian};
use super::operators::CMatrix;
use crate::error::{Error, Result};
use crate::units::thermal_energy_mhz;

/// Levels closer than this (MHz) are treated as one degenerate block.
pub const DEGENERACY_TOL_MHZ: f64 = 1e-6;

/// Intensities below this fraction of the strongest line are dropped.
const INTENSITY_FLOOR: f64 = 1e-12;

/// Microwave drive geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    /// Linear polarization along a fixed lab axis.
    Linear(Vector3<f64>),
    /// Average over two orthogonal axes perpendicular to the given
    /// quantization direction.
    Perpendicular(Vector3<f64>),
}

impl Drive {
    fn axes(&self) -> Vec<Vector3<f64>> {
        match *self {
            Drive::Linear(e) => vec![e.normalize()],
            Drive::Perpendicular(u) => {
                let u = u.normalize();
                let helper = if u.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
                let e1 = (helper - u * u.dot(&helper)).normalize();
                let e2 = u.cross(&e1);
                vec![e1, e2]
            }
        }
    }

    /// `S·e` in the eigenbasis for each drive axis.
    pub(crate) fn matrices(&self, electron_ops: &[CMatrix; 3], states: &CMatrix) -> Vec<CMatrix> {
        let u_dag = states.adjoint();
        self.axes()
            .into_iter()
            .map(|e| {
                let op = &electron_ops[0] * Complex64::new(e.x, 0.0)
                    + &electron_ops[1] * Complex64::new(e.y, 0.0)
                    + &electron_ops[2] * Complex64::new(e.z, 0.0);
                &u_dag * op * states
            })
            .collect()
    }
}

/// Mean over drive axes of |⟨f|S·e|i⟩|².
pub(crate) fn drive_strength(mats: &[CMatrix], i: usize, f: usize) -> f64 {
    mats.iter().map(|m| m[(f, i)].norm_sqr()).sum::<f64>() / mats.len() as f64
}

/// Boltzmann populations of the given levels (uniform at infinite T,
/// ground block only at T = 0).
pub(crate) fn populations(levels: &[f64], temperature_k: f64) -> Vec<f64> {
    let e0 = levels.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = if temperature_k == 0.0 {
        levels.iter().map(|&e| if e - e0 <= DEGENERACY_TOL_MHZ { 1.0 } else { 0.0 }).collect()
    } else {
        let kt = thermal_energy_mhz(temperature_k);
        levels.iter().map(|&e| (-(e - e0) / kt).exp()).collect()
    };
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// Groups ascending levels into runs of (near-)equal energy.
pub(crate) fn degenerate_blocks(levels: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut blocks = Vec::new();
    let mut start = 0;
    for k in 1..=levels.len() {
        if k == levels.len() || levels[k] - levels[k - 1] > DEGENERACY_TOL_MHZ {
            blocks.push(start..k);
            start = k;
        }
    }
    blocks
}

fn mean_over(v: &[f64], r: &std::ops::Range<usize>) -> f64 {
    v[r.clone()].iter().sum::<f64>() / r.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub frequency_mhz: f64,
    pub intensity: f64,
    /// Lower and upper state (first index of each degenerate block).
    pub initial: usize,
    pub final_state: usize,
    /// Electron-only eigenstates (ascending) dominating the initial and
    /// final states; identifies the fine-structure branch.
    pub manifold: (usize, usize),
    /// Total nuclear projection ⟨M⟩ along the quantization axis in the
    /// initial and final states.
    pub nuclear_m: (f64, f64),
    /// ⟨M²⟩ in the initial and final states.
    pub nuclear_m_sq: (f64, f64),
}

impl Transition {
    pub fn assignment(&self) -> String {
        format!("{}->{}", self.initial, self.final_state)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TransitionList {
    pub entries: Vec<Transition>,
}

impl TransitionList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_intensity(&self) -> f64 {
        self.entries.iter().map(|t| t.intensity).sum()
    }

    /// Entries within `[lo, hi]` MHz.
    pub fn within(&self, lo: f64, hi: f64) -> TransitionList {
        TransitionList {
            entries: self
                .entries
                .iter()
                .filter(|t| t.frequency_mhz >= lo && t.frequency_mhz <= hi)
                .cloned()
                .collect(),
        }
    }

    pub fn sort_by_frequency(&mut self) {
        self.entries.sort_by(|a, b| a.frequency_mhz.total_cmp(&b.frequency_mhz));
    }
}

/// Transitions with frequency inside `range_mhz`. Intensities of
/// degenerate block pairs are summed; with a temperature they are weighted
/// by the population difference.
pub fn transitions(
    eig: &EigenSystem,
    ham: &SpinHamiltonian,
    drive: Drive,
    range_mhz: (f64, f64),
    temperature_k: Option<f64>,
) -> Result<TransitionList> {
    let u = match drive {
        Drive::Perpendicular(u) => u,
        Drive::Linear(_) => Vector3::z(),
    };
    let (lo, hi) = range_mhz;
    if !(lo < hi) {
        return Err(Error::invalid(format!("empty frequency range [{lo}, {hi}] MHz")));
    }
    let mats = drive.matrices(&ham.electron_ops, &eig.states);
    let labels = ham.electron_labels(&eig.states)?;
    let (m, m2) = ham.nuclear_projection(&eig.states, &u);
    let pops = temperature_k.map(|t| populations(&eig.levels, t));
    let blocks = degenerate_blocks(&eig.levels);
    let mean = |r: &std::ops::Range<usize>| eig.levels[r.clone()].iter().sum::<f64>() / r.len() as f64;

    let mut entries = Vec::new();
    for (bi, lower) in blocks.iter().enumerate() {
        for upper in &blocks[bi + 1..] {
            let freq = mean(upper) - mean(lower);
            if freq < lo || freq > hi {
                continue;
            }
            let mut strength = 0.0;
            for i in lower.clone() {
                for f in upper.clone() {
                    strength += drive_strength(&mats, i, f);
                }
            }
            if let Some(p) = &pops {
                strength *= (p[lower.start] - p[upper.start]).abs();
            }
            entries.push(Transition {
                frequency_mhz: freq,
                intensity: strength,
                initial: lower.start,
                final_state: upper.start,
                manifold: (labels[lower.start], labels[upper.start]),
                nuclear_m: (mean_over(&m, lower), mean_over(&m, upper)),
                nuclear_m_sq: (mean_over(&m2, lower), mean_over(&m2, upper)),
            });
        }
    }
    let max = entries.iter().map(|t| t.intensity).fold(0.0, f64::max);
    entries.retain(|t| t.intensity > INTENSITY_FLOOR * max && t.intensity > 0.0);
    let mut list = TransitionList { entries };
    list.sort_by_frequency();
    Ok(list)
}
