//! e⊗E Jahn–Teller vibronic problem: exact diagonalization in a truncated
//! two-mode Fock basis, the classical potential, and the Ham factor p.
//!
//! Energies are in meV.

mod apes;
mod model;
mod solve;

pub use apes::{fit_couplings, lower_sheet, radial_minimum, scan_apes, ApesExtrema, Couplings, FIT_TOL};
pub use model::{basis, build_jt_hamiltonian, sector_hamiltonian, BasisState, JtModel, Sector, DEFAULT_NMAX, MIN_NMAX};
pub use solve::{
    sector_ground_energies, solve, solve_converged, solve_unchecked, PolaronSolution, SectorEnergies, CONVERGENCE_TOL,
};

use rayon::prelude::*;

use crate::error::Result;
use crate::verify::Check;

/// Largest truncation the sweep escalates to before giving up on a point.
pub const SWEEP_NMAX_CAP: usize = 80;

/// Energetic targets for the coupling fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JtTargets {
    pub e_jt: f64,
    pub barrier: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub hbar_omega: f64,
    pub couplings: Couplings,
    pub solution: PolaronSolution,
}

/// Fits couplings and solves at each ħω; points run in parallel.
pub fn sweep(targets: JtTargets, hbar_omegas: &[f64], n_max: usize) -> Result<Vec<SweepPoint>> {
    hbar_omegas
        .par_iter()
        .map(|&w| {
            let c = fit_couplings(targets.e_jt, targets.barrier, w)?;
            let model = JtModel::new(w, c.f, c.g, n_max)?;
            let solution = solve_converged(&model, SWEEP_NMAX_CAP.max(n_max))?;
            Ok(SweepPoint {
                hbar_omega: w,
                couplings: c,
                solution,
            })
        })
        .collect()
}

/// Fit plus solve for a single phonon energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JtJob {
    pub targets: JtTargets,
    pub hbar_omega: f64,
    pub n_max: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JtOutput {
    pub couplings: Couplings,
    pub solution: PolaronSolution,
}

impl JtJob {
    pub fn run(&self) -> Result<JtOutput> {
        let couplings = fit_couplings(self.targets.e_jt, self.targets.barrier, self.hbar_omega)?;
        let model = JtModel::new(self.hbar_omega, couplings.f, couplings.g, self.n_max)?;
        let solution = solve(&model)?;
        Ok(JtOutput { couplings, solution })
    }

    pub fn verify(&self) -> Result<Vec<Check>> {
        let out = self.run()?;
        let m = out.solution.model;
        let ext = scan_apes(m.hbar_omega, m.f, m.g);
        let de = (ext.e_jt / self.targets.e_jt - 1.0).abs();
        let db = if self.targets.barrier > 0.0 {
            (ext.barrier / self.targets.barrier - 1.0).abs()
        } else {
            ext.barrier.abs() / self.targets.e_jt
        };
        let mut checks = vec![Check::new(
            "apes_rescan",
            de <= 1e-3 && db <= 1e-3,
            format!("E_JT {:.6} meV, barrier {:.6} meV", ext.e_jt, ext.barrier),
        )];

        let (states, h) = build_jt_hamiltonian(&m)?;
        let asym = (&h - h.transpose()).abs().max();
        let mut leak = 0.0f64;
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                if a.sector() != b.sector() {
                    leak = leak.max(h[(i, j)].abs());
                }
            }
        }
        checks.push(Check::new(
            "block_structure",
            asym == 0.0 && leak == 0.0,
            format!("asymmetry {asym:.1e}, cross-sector element {leak:.1e}"),
        ));

        let gap = (out.solution.ground_doublet.0 - out.solution.ground_doublet.1).abs();
        checks.push(Check::new(
            "doublet_degeneracy",
            gap <= CONVERGENCE_TOL * m.hbar_omega,
            format!("gap {gap:.3e} meV"),
        ));
        let small = solve_unchecked(&m.with_n_max(m.n_max.saturating_sub(10).max(MIN_NMAX)))?;
        checks.push(Check::new(
            "variational_monotonicity",
            out.solution.ground_energy() <= small.ground_energy() + 1e-9,
            format!(
                "E0(n_max={}) = {:.9}, E0(n_max={}) = {:.9}",
                small.model.n_max,
                small.ground_energy(),
                m.n_max,
                out.solution.ground_energy()
            ),
        ));
        let p = out.solution.ham_factor;
        checks.push(Check::new("ham_factor_range", p > 0.0 && p <= 1.0, format!("p = {p:.6}")));
        Ok(checks)
    }
}
