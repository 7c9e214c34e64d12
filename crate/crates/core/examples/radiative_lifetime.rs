use defectoscope::radiative::{radiative_rate, EmitterParams};

fn main() -> defectoscope::Result<()> {
    for (e, mu, n) in [(1.69, 0.8, 2.1), (1.69, 0.8, 1.0), (1.945, 5.2, 2.42)] {
        let r = radiative_rate(&EmitterParams::new(e, mu, n)?)?;
        println!("E = {e} eV, mu = {mu} D, n = {n}: Gamma = {:.3e} 1/s, tau = {:.3} us", r.gamma, r.tau_us());
    }
    Ok(())
}
