use defectoscope::radiative::{radiative_rate, EmitterParams};
use defectoscope::units::{coulomb_meter_to_debye, debye_to_coulomb_meter};
use proptest::prelude::*;

fn gamma(e: f64, mu: f64, n: f64) -> f64 {
    radiative_rate(&EmitterParams::new(e, mu, n).unwrap()).unwrap().gamma
}

/// Γ evaluated step by step in SI with literal CODATA-2018 values.
fn gamma_si(e_ev: f64, mu_debye: f64, n: f64) -> f64 {
    let e = e_ev * 1.602_176_634e-19;
    let mu = mu_debye * 3.335_640_951_981_52e-30;
    let eps0 = 8.854_187_812_8e-12;
    let c = 299_792_458.0f64;
    let hbar = 1.054_571_817e-34f64;
    n * e * e * e * mu * mu / (3.0 * std::f64::consts::PI * eps0 * c.powi(3) * hbar.powi(4))
}

#[test]
fn reference_lifetime() {
    let r = radiative_rate(&EmitterParams::new(1.69, 0.8, 2.1).unwrap()).unwrap();
    assert!((r.tau_us() - 0.94).abs() < 0.005, "τ = {} μs", r.tau_us());
    assert!((0.90..=0.98).contains(&r.tau_us()));
    assert!((r.gamma / gamma_si(1.69, 0.8, 2.1) - 1.0).abs() < 1e-9);
    assert!((r.gamma * r.tau - 1.0).abs() < 1e-15);
}

#[test]
fn dark_transition_has_infinite_lifetime() {
    let r = radiative_rate(&EmitterParams::new(1.69, 0.0, 2.1).unwrap()).unwrap();
    assert_eq!(r.gamma, 0.0);
    assert!(r.tau.is_infinite() && r.is_dark());
}

#[test]
fn unphysical_inputs_rejected() {
    assert!(EmitterParams::new(0.0, 0.8, 2.1).is_err());
    assert!(EmitterParams::new(1.69, -0.1, 2.1).is_err());
    assert!(EmitterParams::new(1.69, 0.8, 0.9).is_err());
    assert!(EmitterParams::new(f64::NAN, 0.8, 2.1).is_err());
}

#[test]
fn exact_scaling_laws() {
    let base = gamma(1.69, 0.8, 2.1);
    assert!((gamma(1.69, 1.6, 2.1) / base - 4.0).abs() < 1e-14);
    assert!((gamma(3.38, 0.8, 2.1) / base - 8.0).abs() < 1e-14);
    assert!((gamma(1.69, 0.8, 4.2) / base - 2.0).abs() < 1e-14);
}

proptest! {
    #[test]
    fn scaling_holds_everywhere(e in 0.1f64..5.0, mu in 0.01f64..20.0, n in 1.0f64..4.0) {
        let g = gamma(e, mu, n);
        prop_assert!((gamma(e, 2.0 * mu, n) / g - 4.0).abs() < 1e-13);
        prop_assert!((gamma(2.0 * e, mu, n) / g - 8.0).abs() < 1e-13);
        prop_assert!((gamma(e, mu, 2.0 * n) / g - 2.0).abs() < 1e-13);
        let r = radiative_rate(&EmitterParams::new(e, mu, n).unwrap()).unwrap();
        prop_assert!((r.gamma * r.tau - 1.0).abs() < 1e-15);
    }

    #[test]
    fn debye_round_trip(mu in 0.0f64..1e3) {
        let back = coulomb_meter_to_debye(debye_to_coulomb_meter(mu));
        prop_assert!((back - mu).abs() <= 1e-12 * mu.max(1e-300));
    }
}
