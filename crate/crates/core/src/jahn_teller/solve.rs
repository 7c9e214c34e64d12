//! Vibronic ground doublet and Ham reduction factor.

use nalgebra::SymmetricEigen;

use super::model::{sector_hamiltonian, BasisState, JtModel, Sector};
use crate::error::{Error, Result};

/// Allowed ground-energy change between n_max and n_max + 5, in ħω.
pub const CONVERGENCE_TOL: f64 = 1e-4;

/// Lowest eigenpair of one sector.
fn lowest(model: &JtModel, sector: Sector) -> Result<(f64, Vec<BasisState>, Vec<f64>)> {
    let (states, h) = sector_hamiltonian(model, sector)?;
    let eig = SymmetricEigen::try_new(h, 1e-14, 100_000)
        .ok_or_else(|| Error::Convergence(format!("{sector:?} sector at n_max = {}", model.n_max)))?;
    let k = eig.eigenvalues.imin();
    let vector = eig.eigenvectors.column(k).iter().copied().collect();
    Ok((eig.eigenvalues[k], states, vector))
}

/// Lowest energies of the three sectors (meV).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorEnergies {
    pub half: f64,
    pub minus_half: f64,
    pub three_halves: f64,
}

/// Lowest eigenvalue of one sector, without eigenvectors.
fn lowest_energy(model: &JtModel, sector: Sector) -> Result<f64> {
    let (_, h) = sector_hamiltonian(model, sector)?;
    Ok(h.symmetric_eigenvalues().min())
}

pub fn sector_ground_energies(model: &JtModel) -> Result<SectorEnergies> {
    Ok(SectorEnergies {
        half: lowest_energy(model, Sector::Half)?,
        minus_half: lowest_energy(model, Sector::MinusHalf)?,
        three_halves: lowest_energy(model, Sector::ThreeHalves)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolaronSolution {
    pub model: JtModel,
    /// Lowest J ≡ ±1/2 energies (meV).
    pub ground_doublet: (f64, f64),
    /// Lowest J ≡ 3/2 energy (meV).
    pub singlet_energy: f64,
    pub ham_factor: f64,
    /// |E₀(n_max + 5) − E₀(n_max)| in meV.
    pub convergence: f64,
}

impl PolaronSolution {
    pub fn ground_energy(&self) -> f64 {
        self.ground_doublet.0.min(self.ground_doublet.1)
    }
}

/// ⟨Ψ|σ_y|Ψ⟩ over the J ≡ 1/2 ground state; σ_y = |+⟩⟨+| − |−⟩⟨−|, whose
/// bare doublet element is 1.
fn ham_factor(states: &[BasisState], vector: &[f64]) -> f64 {
    states.iter().zip(vector).map(|(s, c)| s.tau as f64 * c * c).sum()
}

/// Solves without the truncation check.
pub fn solve_unchecked(model: &JtModel) -> Result<PolaronSolution> {
    let (e_half, states, vector) = lowest(model, Sector::Half)?;
    let e_minus = lowest_energy(model, Sector::MinusHalf)?;
    let e_three = lowest_energy(model, Sector::ThreeHalves)?;
    Ok(PolaronSolution {
        model: *model,
        ground_doublet: (e_half, e_minus),
        singlet_energy: e_three,
        ham_factor: ham_factor(&states, &vector),
        convergence: f64::NAN,
    })
}

/// Ground doublet and Ham factor, verified against n_max + 5 and against
/// a J ≡ 3/2 singlet falling below the doublet.
pub fn solve(model: &JtModel) -> Result<PolaronSolution> {
    let mut sol = solve_unchecked(model)?;
    let bigger = model.with_n_max(model.n_max + 5);
    let e_big = lowest_energy(&bigger, Sector::Half)?;
    sol.convergence = (e_big - sol.ground_doublet.0).abs();
    let tol = CONVERGENCE_TOL * model.hbar_omega;
    if sol.convergence > tol {
        return Err(Error::Convergence(format!(
            "ground energy moves by {:.3e} meV from n_max = {} to {} (tolerance {:.1e} meV); raise n_max",
            sol.convergence,
            model.n_max,
            model.n_max + 5,
            tol
        )));
    }
    let gap = (sol.ground_doublet.0 - sol.ground_doublet.1).abs();
    if gap > tol {
        return Err(Error::Convergence(format!("ground doublet split by {gap:.3e} meV")));
    }
    if sol.singlet_energy < sol.ground_energy() - tol {
        return Err(Error::invalid(format!(
            "ground state is a J ≡ 3/2 singlet ({:.6} meV below the doublet); no Ham factor for a doublet",
            sol.ground_energy() - sol.singlet_energy
        )));
    }
    Ok(sol)
}

/// Raises n_max in steps of 10 until [`solve`] passes or `cap` is reached.
pub fn solve_converged(model: &JtModel, cap: usize) -> Result<PolaronSolution> {
    let mut m = *model;
    loop {
        match solve(&m) {
            Err(Error::Convergence(_)) if m.n_max + 10 <= cap => m.n_max += 10,
            other => return other,
        }
    }
}
