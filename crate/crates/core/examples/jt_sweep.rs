//! Ham reduction factor across phonon energies for fixed E_JT and barrier.

use defectoscope::jahn_teller::{sweep, JtTargets, DEFAULT_NMAX};

fn main() -> defectoscope::Result<()> {
    let targets = JtTargets { e_jt: 210.0, barrier: 159.0 };
    let omegas = [50.0, 75.0, 100.0, 150.0, 200.0];
    for pt in sweep(targets, &omegas, DEFAULT_NMAX)? {
        println!(
            "hw = {:5.1} meV  F = {:7.2}  G = {:6.2}  p = {:.3e}",
            pt.hbar_omega, pt.couplings.f, pt.couplings.g, pt.solution.ham_factor
        );
    }
    Ok(())
}
