//! cw-ODMR spectra with exact core nuclei and first-order perturbative
//! nuclei.

use nalgebra::Vector3;
use num_complex::Complex64;

use super::hamiltonian::{build_hamiltonian, eigensolve, EigenSystem};
use super::operators::CMatrix;
use super::rotation::rotate_system;
use super::system::{SpinSystem, SweepSpec};
use super::transitions::{degenerate_blocks, drive_strength, populations, Drive, Transition, TransitionList};
use crate::error::Result;
use crate::spectrum::{Spectrum, SpectrumKind, SpectrumMeta};

const FWHM_TO_SIGMA: f64 = 0.424_660_900_144_009_5; // 1 / (2 √(2 ln 2))

/// Shifts closer than this (MHz) are merged when combining nuclei.
const SHIFT_MERGE_MHZ: f64 = 1e-6;

/// Gaussian FWHM (MHz) for quantization direction `u`: √Σ (u_a h_a)².
pub fn strain_fwhm(h_strain: &[f64; 3], u: &Vector3<f64>) -> f64 {
    (0..3).map(|a| (u[a] * h_strain[a]).powi(2)).sum::<f64>().sqrt()
}

/// A perturbatively dressed line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub frequency_mhz: f64,
    pub intensity: f64,
}

#[derive(Debug, Clone)]
pub struct HybridResult {
    pub spectrum: Spectrum,
    /// Core transitions before perturbative splitting.
    pub core: TransitionList,
    /// Core transitions replicated over perturbative m_I combinations.
    pub lines: Vec<Line>,
    pub fwhm_mhz: f64,
}

/// Within each degenerate block, rotates the eigenvectors so that u·S is
/// diagonal, which makes first-order shifts well defined.
fn resolve_degeneracies(eig: &mut EigenSystem, electron_ops: &[CMatrix; 3], u: &Vector3<f64>) -> Result<()> {
    let us = &electron_ops[0] * Complex64::new(u.x, 0.0)
        + &electron_ops[1] * Complex64::new(u.y, 0.0)
        + &electron_ops[2] * Complex64::new(u.z, 0.0);
    for block in degenerate_blocks(&eig.levels) {
        if block.len() < 2 {
            continue;
        }
        let p = eig.states.columns(block.start, block.len()).into_owned();
        let m = p.adjoint() * &us * &p;
        let w = eigensolve(&m)?.states;
        let rotated = p * w;
        eig.states.columns_mut(block.start, block.len()).copy_from(&rotated);
    }
    Ok(())
}

fn expectation(op: &CMatrix, states: &CMatrix, k: usize) -> f64 {
    let v = states.column(k);
    (v.adjoint() * op * v)[(0, 0)].re
}

/// Discrete distribution of first-order shifts: each nucleus adds m·a for
/// m = -I..I with equal weight.
fn shift_distribution(couplings: &[(f64, u32)]) -> Vec<(f64, f64)> {
    let mut dist = vec![(0.0, 1.0)];
    for &(a, two_i) in couplings {
        let n = two_i as usize + 1;
        let w = 1.0 / n as f64;
        let mut next = Vec::with_capacity(dist.len() * n);
        for &(s, p) in &dist {
            for k in 0..n {
                let m = -(two_i as f64) / 2.0 + k as f64;
                next.push((s + m * a, p * w));
            }
        }
        next.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(next.len());
        for (s, p) in next {
            match merged.last_mut() {
                Some(last) if (s - last.0).abs() <= SHIFT_MERGE_MHZ => last.1 += p,
                _ => merged.push((s, p)),
            }
        }
        dist = merged;
    }
    dist
}

/// Simulates the sweep: core nuclei exactly, the rest as first-order
/// shifts |A_kᵀ(⟨S⟩_f − ⟨S⟩_i)| m_I per transition, Gaussian broadening
/// from the strain FWHM.
pub fn hybrid_spectrum(sys: &SpinSystem, sweep: &SweepSpec) -> Result<HybridResult> {
    sweep.validate()?;
    let sys = if sweep.euler_deg == [0.0; 3] {
        sys.clone()
    } else {
        rotate_system(sys, sweep.euler_deg)
    };
    let b = sweep.b_mt;
    let u = sweep.quantization_axis();
    let ham = build_hamiltonian(&sys, &b, true)?;
    let mut eig = eigensolve(&ham.matrix)?;
    resolve_degeneracies(&mut eig, &ham.electron_ops, &u)?;
    let labels = ham.electron_labels(&eig.states)?;
    let (nuclear_m, nuclear_m_sq) = ham.nuclear_projection(&eig.states, &u);

    let n = eig.levels.len();
    let mean_s: Vec<Vector3<f64>> = (0..n)
        .map(|k| Vector3::from_fn(|a, _| expectation(&ham.electron_ops[a], &eig.states, k)))
        .collect();

    let fwhm = {
        let f = strain_fwhm(&sys.h_strain, &u);
        let step = (sweep.range_ghz.1 - sweep.range_ghz.0) * 1e3 / (sweep.n_points - 1) as f64;
        if f > 0.0 {
            f
        } else {
            step
        }
    };
    let sigma = fwhm * FWHM_TO_SIGMA;
    let perturbative: Vec<_> = sys.perturbative_nuclei().collect();
    let spread: f64 = perturbative
        .iter()
        .map(|nuc| nuc.spin() * 2.0 * sys.two_s as f64 / 2.0 * nuc.a.norm())
        .sum();
    let (lo, hi) = sweep.range_mhz();
    let margin = 6.0 * sigma + spread;

    let mats = Drive::Perpendicular(u).matrices(&ham.electron_ops, &eig.states);
    let pops = sweep.temperature_k.map(|t| populations(&eig.levels, t));

    let mut core = Vec::new();
    for i in 0..n {
        for f in i + 1..n {
            let freq = eig.levels[f] - eig.levels[i];
            if freq < lo - margin || freq > hi + margin {
                continue;
            }
            let mut strength = drive_strength(&mats, i, f);
            if let Some(p) = &pops {
                strength *= (p[i] - p[f]).abs();
            }
            if strength > 0.0 {
                core.push(Transition {
                    frequency_mhz: freq,
                    intensity: strength,
                    initial: i,
                    final_state: f,
                    manifold: (labels[i], labels[f]),
                    nuclear_m: (nuclear_m[i], nuclear_m[f]),
                    nuclear_m_sq: (nuclear_m_sq[i], nuclear_m_sq[f]),
                });
            }
        }
    }
    let max = core.iter().map(|t| t.intensity).fold(0.0, f64::max);
    core.retain(|t| t.intensity > 1e-12 * max);

    let mut lines = Vec::new();
    for t in &core {
        let ds = mean_s[t.final_state] - mean_s[t.initial];
        let couplings: Vec<(f64, u32)> = perturbative.iter().map(|nuc| ((nuc.a.transpose() * ds).norm(), nuc.two_i)).collect();
        for (shift, w) in shift_distribution(&couplings) {
            lines.push(Line {
                frequency_mhz: t.frequency_mhz + shift,
                intensity: t.intensity * w,
            });
        }
    }

    let axis: Vec<f64> = crate::spectrum::Grid::new(lo, hi, sweep.n_points)?.points();
    let mut intensity = vec![0.0; axis.len()];
    let step = (hi - lo) / (axis.len() - 1) as f64;
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    for line in &lines {
        let first = (((line.frequency_mhz - 6.0 * sigma - lo) / step).ceil().max(0.0)) as usize;
        let last = (((line.frequency_mhz + 6.0 * sigma - lo) / step).floor()).min((axis.len() - 1) as f64);
        if last < 0.0 {
            continue;
        }
        for k in first..=last as usize {
            let z = (axis[k] - line.frequency_mhz) / sigma;
            intensity[k] += line.intensity * norm * (-0.5 * z * z).exp();
        }
    }

    let mut meta = SpectrumMeta::new(SpectrumKind::Odmr).with_normalization("none");
    meta.temperature_k = sweep.temperature_k;
    meta.set("B_mT", format!("{} {} {}", b.x, b.y, b.z));
    meta.set("fwhm_MHz", fwhm);
    meta.set("core_nuclei", sys.core_nuclei().count());
    meta.set("perturbative_nuclei", perturbative.len());
    let spectrum = Spectrum::new(axis, intensity, meta)?;

    let mut core = TransitionList { entries: core };
    core.sort_by_frequency();
    Ok(HybridResult {
        spectrum,
        core: core.within(lo, hi),
        lines,
        fwhm_mhz: fwhm,
    })
}
