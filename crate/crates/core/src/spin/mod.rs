//! Triplet spin Hamiltonians and cw-ODMR simulation.
//!
//! Energies are in MHz, fields in mT. The product space is ordered electron
//! first, then the exactly treated nuclei in input order; each local basis
//! runs `m = s, s-1, ..., -s`.

mod analysis;
mod hamiltonian;
mod hybrid;
mod operators;
mod rotation;
mod system;
mod transitions;

pub use analysis::{multiplets, LineGroup, Multiplet};
pub use hamiltonian::{build_hamiltonian, eigensolve, EigenSystem, SpinHamiltonian, DIMENSION_CAP};
pub use hybrid::{hybrid_spectrum, strain_fwhm, HybridResult, Line};
pub use operators::{embed, hermiticity_defect, spin_matrices, CMatrix};
pub use rotation::{euler_zyz, rotate_system, rotate_system_by};
pub use system::{isotope_data, quantization_axis, zfs_tensor, NucleusSpec, SpinSystem, SweepSpec, SYMMETRY_TOL_MHZ};
pub use transitions::{transitions, Drive, Transition, TransitionList, DEGENERACY_TOL_MHZ};

use crate::error::Result;
use crate::verify::Check;

/// A spin system together with the sweep to simulate.
#[derive(Debug, Clone, PartialEq)]
pub struct OdmrJob {
    pub system: SpinSystem,
    pub sweep: SweepSpec,
}

impl OdmrJob {
    pub fn run(&self) -> Result<HybridResult> {
        hybrid_spectrum(&self.system, &self.sweep)
    }

    /// Hermiticity, eigen-residual and trace checks on the core
    /// Hamiltonian at the sweep field, plus branch symmetry at zero field.
    pub fn verify(&self) -> Result<Vec<Check>> {
        let sys = rotate_system(&self.system, self.sweep.euler_deg);
        let ham = build_hamiltonian(&sys, &self.sweep.b_mt, true)?;
        let herm = hermiticity_defect(&ham.matrix);
        let mut checks = vec![Check::new("hermitian", herm <= 1e-12, format!("relative defect {herm:.2e}"))];

        let eig = eigensolve(&ham.matrix)?;
        let norm = ham.matrix.norm();
        let res = eig.max_residual(&ham.matrix);
        checks.push(Check::new(
            "eigen_residual",
            res <= 1e-8 * norm.max(1.0),
            format!("max ‖Hv − λv‖ = {res:.2e} (‖H‖ = {norm:.3e})"),
        ));
        let tr = ham.matrix.trace().re;
        let sum: f64 = eig.levels.iter().sum();
        checks.push(Check::new(
            "trace_identity",
            (sum - tr).abs() <= 1e-6 * tr.abs().max(1.0),
            format!("Σλ = {sum:.9}, tr H = {tr:.9}"),
        ));

        let zero = build_hamiltonian(&sys, &nalgebra::Vector3::zeros(), true)?;
        let eig0 = eigensolve(&zero.matrix)?;
        let t = transitions(&eig0, &zero, Drive::Perpendicular(nalgebra::Vector3::z()), (1e-3, f64::MAX), None)?;
        let mut branch = [0.0f64; 3];
        for tr in &t.entries {
            if tr.manifold.0 != tr.manifold.1 {
                let hi = tr.manifold.0.max(tr.manifold.1);
                let lo = tr.manifold.0.min(tr.manifold.1);
                branch[lo + hi - 1] += tr.intensity;
            }
        }
        // for S = 1 with D > 0 the main branches are 0→1 and 0→2
        let (a, b) = (branch[0], branch[1]);
        let rel = if a + b > 0.0 { (a - b).abs() / (0.5 * (a + b)) } else { 0.0 };
        checks.push(Check::new(
            "zero_field_branch_symmetry",
            sys.two_s != 2 || rel <= 1e-3,
            format!("branch intensities {a:.6} / {b:.6}, relative difference {rel:.2e}"),
        ));
        Ok(checks)
    }
}
