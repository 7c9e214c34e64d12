mod common;

use common::{data_path, mode, random_modes, thermal_fc_lines};
use defectoscope::io::parse_mode_table;
use defectoscope::lineshape::*;
use defectoscope::{Grid, Spectrum};
use proptest::prelude::*;

fn poisson(s: f64, n: usize) -> f64 {
    // independent of the library: direct product, no recurrence reuse
    let mut p = (-s).exp();
    for k in 1..=n {
        p *= s / k as f64;
    }
    p
}

#[test]
fn single_mode_t0_weights_are_poisson() {
    for &(energy, s) in &[(25.0, 0.3), (40.0, 1.0), (12.5, 3.46), (60.0, 5.0)] {
        let modes = [mode(0, energy, s)];
        let grid = TransformGrid::auto(&modes, 0.0, 5.0).unwrap();
        let step = (energy / grid.bin_mev).round() as i64;
        let conv = zero_temperature_lines(&modes, Some(n_max_for_tail(s, 1e-16)), &grid).unwrap();
        let gen = thermal_lines(&modes, 0.0, &grid).unwrap();
        for n in 0..30 {
            let expected = poisson(s, n);
            let m = n as i64 * step;
            assert!((conv.lines.weight(m) - expected).abs() < 1e-10, "convolution S={s} n={n}");
            assert!((gen.weight(m) - expected).abs() < 1e-10, "transform S={s} n={n}");
        }
    }
}

#[test]
fn transform_matches_convolution_for_random_sets() {
    for seed in 0..4u64 {
        let s_tot = 1.0 + seed as f64;
        let modes = random_modes(seed, 10, s_tot);
        let grid = TransformGrid::auto(&modes, 0.0, 5.0).unwrap();
        let conv = zero_temperature_lines(&modes, Some(n_max_for_tail(s_tot, 1e-15)), &grid).unwrap();
        let gen = thermal_lines(&modes, 0.0, &grid).unwrap();
        let (_, l1) = conv.lines.distance(&gen);
        assert!(l1 < 1e-6, "seed {seed}: L1 = {l1:e}");
    }
}

#[test]
fn broadened_routes_agree_in_l1() {
    let modes = random_modes(11, 10, 4.5);
    let grid = Grid::new(-0.2, 0.8, 4001).unwrap();
    let a = lineshape_t0(&modes, Some(n_max_for_tail(4.5, 1e-15)), 5.0, &grid).unwrap();
    let b = lineshape_generating(&modes, 0.0, 5.0, &grid).unwrap();
    let l1 = a.l1_distance(&b).unwrap();
    assert!(l1 < 1e-6, "L1 = {l1:e}");
}

fn compare_with_fc(modes: &[PhononMode], temperature: f64) {
    let grid = TransformGrid::auto(modes, temperature, 5.0).unwrap();
    let lines = thermal_lines(modes, temperature, &grid).unwrap();
    let oracle = thermal_fc_lines(modes, temperature, grid.bin_mev);
    let lo = lines.first_index().min(*oracle.keys().next().unwrap());
    let hi = (lines.first_index() + lines.weights().len() as i64).max(*oracle.keys().last().unwrap() + 1);
    let err: f64 = (lo..hi)
        .map(|m| (lines.weight(m) - oracle.get(&m).copied().unwrap_or(0.0)).abs())
        .sum();
    assert!(err < 1e-6, "T = {temperature}: Σ|Δ| = {err:e}");
}

#[test]
fn thermal_lines_match_franck_condon_two_modes_300k() {
    compare_with_fc(&[mode(0, 20.0, 1.2), mode(1, 35.0, 0.6)], 300.0);
}

#[test]
fn thermal_lines_match_franck_condon_three_modes() {
    let modes = [mode(0, 15.0, 0.8), mode(1, 42.5, 0.5), mode(2, 70.0, 0.3)];
    for t in [0.0, 77.0, 300.0, 600.0] {
        compare_with_fc(&modes, t);
    }
}

#[test]
fn franck_condon_rows_are_normalized() {
    let fc = common::franck_condon(2.0, common::FC_QUANTA);
    for n in 0..10 {
        let sum: f64 = fc.iter().map(|row| row[n] * row[n]).sum();
        assert!((sum - 1.0).abs() < 1e-12, "column {n}");
    }
}

#[test]
fn shipped_mode_table_has_published_totals() {
    let modes = parse_mode_table(&data_path("vb_modes.csv")).unwrap();
    let t = total_hr(&modes).unwrap();
    assert!((t.total - 3.46).abs() < 1e-12);
    assert!((t.a1 - 0.52).abs() < 1e-12);
    let grid = TransformGrid::auto(&modes, 0.0, 5.0).unwrap();
    let r = zero_temperature_lines(&modes, None, &grid).unwrap();
    assert!((r.lines.weight(0) - 0.0314).abs() < 1e-4);
    assert_eq!(r.lines.weight(0), (-t.total).exp());
}

#[test]
fn zpl_weight_for_any_set_with_published_total() {
    for seed in 0..5 {
        let modes = random_modes(100 + seed, 6, 3.46);
        let w = zpl_weight(&modes, 0.0).unwrap();
        assert!((w - 0.0314).abs() < 1e-4);
    }
}

#[test]
fn finite_temperature_zpl_from_long_time_limit() {
    let modes = parse_mode_table(&data_path("vb_modes.csv")).unwrap();
    for t in [4.0, 150.0, 300.0] {
        let g = generating_function(&modes, t, 2.0, 40.0).unwrap();
        let dw = zpl_weight(&modes, t).unwrap();
        assert!((g.re - dw).abs() < 1e-6, "T = {t}");
    }
}

#[test]
fn first_moment_at_zero_temperature() {
    let modes = random_modes(7, 8, 3.0);
    let expected: f64 = modes.iter().map(|m| m.hr_factor * m.energy_mev).sum();
    let grid = TransformGrid::auto(&modes, 0.0, 5.0).unwrap();
    let r = zero_temperature_lines(&modes, Some(n_max_for_tail(3.0, 1e-16)), &grid).unwrap();
    let rel = (r.lines.first_moment_mev() - expected).abs() / expected;
    assert!(rel < 1e-8, "relative error {rel:e}");
}

#[test]
fn stokes_identity() {
    let modes = random_modes(3, 5, 2.7);
    let lhs = stokes_shift(&modes).unwrap();
    let rhs = 2.0 * total_hr(&modes).unwrap().total * mean_phonon_energy(&modes).unwrap();
    assert!((lhs - rhs).abs() <= 1e-12 * lhs);
    assert_eq!(stokes_shift(&[mode(0, 100.0, 2.0)]).unwrap(), 400.0);
    assert_eq!(stokes_shift(&[mode(0, 100.0, 1.0), mode(1, 200.0, 1.0)]).unwrap(), 600.0);
}

#[test]
fn anti_stokes_weight_grows_with_temperature() {
    let modes = parse_mode_table(&data_path("vb_modes.csv")).unwrap();
    let anti = |t: f64| {
        let grid = TransformGrid::auto(&modes, t, 5.0).unwrap();
        let lines = thermal_lines(&modes, t, &grid).unwrap();
        lines.iter().filter(|&(e, _)| e < 0.0).map(|(_, w)| w).sum::<f64>()
    };
    let (cold, hot) = (anti(4.0), anti(300.0));
    assert!(hot > cold && hot > 0.1, "4 K {cold:e}, 300 K {hot:e}");
}

#[test]
fn room_temperature_pl_peak_in_window() {
    let modes = parse_mode_table(&data_path("vb_modes.csv")).unwrap();
    let grid = Grid::new(-0.2, 0.8, 4001).unwrap();
    let f = lineshape_generating(&modes, 300.0, 5.0, &grid).unwrap();
    let pl = pl_spectrum(&f, 1.69).unwrap();
    let (x, _) = pl.peak().unwrap();
    assert!((1.60..=1.72).contains(&x), "peak at {x} eV");
}

#[test]
fn mirror_symmetry_at_zero_temperature() {
    let modes = [mode(0, 25.0, 2.94), mode(1, 62.0, 0.52)];
    let grid = Grid::new(-0.3, 0.3, 1201).unwrap();
    let f = lineshape_generating(&modes, 0.0, 5.0, &grid).unwrap();
    let zpl = 1.69;
    let pl = pl_spectrum(&f, zpl).unwrap();
    let abs = absorption_spectrum(&f, zpl).unwrap();
    let peak = f.max_intensity();
    for i in 0..=250 {
        let x = i as f64 * 1e-3;
        let e_a = zpl + x;
        let e_p = zpl - x;
        let a = abs.value_at(e_a) / e_a;
        let p = pl.value_at(e_p) / e_p.powi(3);
        assert!((a - p).abs() <= 1e-8 * peak, "x = {x}: {a} vs {p}");
    }
}

#[test]
fn no_coupling_reduces_to_broadened_zpl() {
    let modes = [mode(0, 50.0, 0.0)];
    let grid = Grid::new(-0.1, 0.1, 801).unwrap();
    let f = lineshape_generating(&modes, 300.0, 5.0, &grid).unwrap();
    let zpl = 1.5;
    let pl = pl_spectrum(&f, zpl).unwrap();
    let abs = absorption_spectrum(&f, zpl).unwrap();
    let lorentz0 = 1e3 / (std::f64::consts::PI * 5.0);
    assert!((f.value_at(0.0) - lorentz0).abs() < 1e-9 * lorentz0);
    assert!((pl.value_at(zpl) - zpl.powi(3) * lorentz0).abs() < 1e-9 * lorentz0);
    assert!((abs.value_at(zpl) - zpl * lorentz0).abs() < 1e-9 * lorentz0);
}

#[test]
fn bose_occupation_examples() {
    assert_eq!(bose_occupation(100.0, 0.0).unwrap(), 0.0);
    let kt: f64 = 8.617_333_262e-2 * 300.0;
    assert!((kt - 25.852).abs() < 1e-3);
    assert!((bose_occupation(100.0, 300.0).unwrap() - 0.0213).abs() < 5e-5);
    let k_b_mev = 1.380_649e-23 / 1.602_176_634e-19 * 1e3;
    let t = 40.0 / (k_b_mev * std::f64::consts::LN_2);
    assert!((bose_occupation(40.0, t).unwrap() - 1.0).abs() < 1e-12);
    assert!(bose_occupation(-1.0, 300.0).is_err());
}

#[test]
fn displacement_representations_agree() {
    // α = 1 at 100 meV: q = 2 / sqrt(ω/ħ), converted to amu^(1/2) Å by hand
    let hbar: f64 = 1.054_571_817e-34;
    let omega = 0.1 * 1.602_176_634e-19 / hbar;
    let q_si = 2.0 / (omega / hbar).sqrt();
    let q = q_si / (1.660_539_066_60e-27f64.sqrt() * 1e-10);
    let s_q = hr_from_displacement(100.0, Displacement::MassWeighted(q)).unwrap();
    let s_a = hr_from_displacement(100.0, Displacement::Dimensionless(1.0)).unwrap();
    let s_f = hr_from_displacement(100.0, Displacement::Force(100.0)).unwrap();
    assert_eq!(s_a, 2.0);
    assert!((s_q - 2.0).abs() < 1e-10);
    assert_eq!(s_f, 2.0);
    assert_eq!(hr_from_displacement(30.0, Displacement::MassWeighted(0.0)).unwrap(), 0.0);
}

#[test]
fn totals_and_means() {
    let m = [mode(0, 10.0, 1.0), mode(1, 20.0, 2.0), mode(2, 30.0, 0.5)];
    assert_eq!(total_hr(&m).unwrap().total, 3.5);
    let split = [
        PhononMode::new(0, 60.0, 0.52, Symmetry::A1).unwrap(),
        PhononMode::new(1, 20.0, 3.12, Symmetry::E).unwrap(),
    ];
    let t = total_hr(&split).unwrap();
    assert_eq!((t.a1, t.e), (0.52, 3.12));
    assert!(total_hr(&[]).is_err());
    assert_eq!(mean_phonon_energy(&[mode(0, 100.0, 1.0)]).unwrap(), 100.0);
    assert_eq!(mean_phonon_energy(&[mode(0, 100.0, 1.0), mode(1, 200.0, 1.0)]).unwrap(), 150.0);
    assert_eq!(mean_phonon_energy(&[mode(0, 100.0, 3.0), mode(1, 200.0, 1.0)]).unwrap(), 125.0);
}

#[test]
fn spectral_function_integrates_to_total() {
    let modes = parse_mode_table(&data_path("vb_modes.csv")).unwrap();
    let grid = Grid::new(0.0, 0.1, 10001).unwrap();
    let s = spectral_function(&modes, &grid, 2.0).unwrap();
    assert!((s.integral() - 3.46).abs() < 3.46e-6);
}

#[test]
fn short_expansion_is_flagged() {
    let modes = [mode(0, 30.0, 4.0)];
    let grid = Grid::new(-0.1, 0.5, 601).unwrap();
    let s: Spectrum = lineshape_t0(&modes, Some(3), 5.0, &grid).unwrap();
    assert_eq!(s.meta.get("truncated"), Some("true"));
    let full = lineshape_t0(&modes, None, 5.0, &grid).unwrap();
    assert_eq!(full.meta.get("truncated"), Some("false"));
}

fn arb_modes() -> impl Strategy<Value = Vec<PhononMode>> {
    prop::collection::vec((8.0f64..120.0, 0.0f64..1.5), 1..5).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (e, s))| mode(i, e, s))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weight_is_conserved(modes in arb_modes(), t in 0.0f64..600.0) {
        let grid = TransformGrid::auto(&modes, t, 5.0).unwrap();
        let lines = thermal_lines(&modes, t, &grid).unwrap();
        prop_assert!((lines.total_weight() - 1.0).abs() < 1e-4);
        prop_assert!(lines.weights().iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn mean_energy_lies_between_extremes(modes in arb_modes()) {
        prop_assume!(modes.iter().any(|m| m.hr_factor > 0.0));
        let mean = mean_phonon_energy(&modes).unwrap();
        let coupled = modes.iter().filter(|m| m.hr_factor > 0.0);
        let lo = coupled.clone().map(|m| m.energy_mev).fold(f64::INFINITY, f64::min);
        let hi = coupled.map(|m| m.energy_mev).fold(0.0, f64::max);
        prop_assert!(mean >= lo * (1.0 - 1e-12) && mean <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn huang_rhys_is_non_negative(e in 1.0f64..200.0, q in -2.0f64..2.0) {
        let s = hr_from_displacement(e, Displacement::MassWeighted(q)).unwrap();
        prop_assert!(s >= 0.0);
        let alpha = alpha_from_mass_weighted(e, q);
        let s2 = hr_from_displacement(e, Displacement::Dimensionless(alpha)).unwrap();
        prop_assert_eq!(s, s2);
        let s3 = hr_from_displacement(e, Displacement::Force(alpha * e)).unwrap();
        prop_assert!((s - s3).abs() <= 1e-12 * s.max(1e-300));
    }

    #[test]
    fn poisson_weights_hold_for_any_coupling(s in 0.01f64..6.0) {
        let modes = [mode(0, 20.0, s)];
        let grid = TransformGrid::new(0.25, 4096).unwrap();
        let lines = thermal_lines(&modes, 0.0, &grid).unwrap();
        for n in 0..25 {
            prop_assert!((lines.weight(80 * n as i64) - poisson(s, n)).abs() < 1e-10);
        }
    }
}
