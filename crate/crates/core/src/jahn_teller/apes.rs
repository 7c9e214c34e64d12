//! Classical adiabatic potential and the inversion from (E_JT, barrier)
//! targets to couplings.
//!
//! With X = ρ cos φ, Y = ρ sin φ the two sheets are
//! V±(ρ, φ) = ½ħωρ² ± ρ √(F² + G²ρ² + 2FGρ cos 3φ).

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Relative accuracy demanded of the fitted extrema.
pub const FIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub f: f64,
    pub g: f64,
}

/// Lower sheet of the classical potential (meV).
pub fn lower_sheet(hbar_omega: f64, f: f64, g: f64, rho: f64, phi: f64) -> f64 {
    let w2 = f * f + g * g * rho * rho + 2.0 * f * g * rho * (3.0 * phi).cos();
    0.5 * hbar_omega * rho * rho - rho * w2.max(0.0).sqrt()
}

/// Golden-section refinement of a bracketed minimum.
fn golden(mut a: f64, mut b: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-13 * (1.0 + c.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Minimum of a function on `[lo, hi]` by a coarse scan plus golden section.
fn scan_min(lo: f64, hi: f64, samples: usize, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let step = (hi - lo) / samples as f64;
    let (mut best, mut best_v) = (0, f64::INFINITY);
    for i in 0..=samples {
        let v = f(lo + i as f64 * step);
        if v < best_v {
            best = i;
            best_v = v;
        }
    }
    let a = lo + best.saturating_sub(1) as f64 * step;
    let b = (lo + (best + 1) as f64 * step).min(hi);
    golden(a, b, f)
}

fn rho_limit(hbar_omega: f64, f: f64, g: f64) -> f64 {
    // Beyond this radius V− > 0 ≥ min V−.
    2.0 * f.abs() / (hbar_omega - 2.0 * g.abs()) + 1.0
}

/// min over ρ of V−(ρ, φ): the radial valley along direction φ.
pub fn radial_minimum(hbar_omega: f64, f: f64, g: f64, phi: f64) -> (f64, f64) {
    let hi = rho_limit(hbar_omega, f, g);
    scan_min(0.0, hi, 400, |rho| lower_sheet(hbar_omega, f, g, rho, phi))
}

/// Depth of the global minimum and the minimum-to-saddle barrier, from a
/// two-dimensional scan of the lower sheet (valley energy as a function of φ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApesExtrema {
    pub e_jt: f64,
    pub barrier: f64,
    pub rho_min: f64,
    pub phi_min: f64,
}

pub fn scan_apes(hbar_omega: f64, f: f64, g: f64) -> ApesExtrema {
    let valley = |phi: f64| radial_minimum(hbar_omega, f, g, phi).1;
    // One period of cos 3φ holds one minimum and one saddle.
    let period = 2.0 * PI / 3.0;
    let (phi_min, e_min) = scan_min(-PI / 3.0, -PI / 3.0 + period, 360, valley);
    let (_, neg_saddle) = scan_min(-PI / 3.0, -PI / 3.0 + period, 360, |p| -valley(p));
    let rho_min = radial_minimum(hbar_omega, f, g, phi_min).0;
    ApesExtrema {
        e_jt: -e_min,
        barrier: -neg_saddle - e_min,
        rho_min,
        phi_min,
    }
}

/// Extremum conditions on the two symmetry rays: the valley bottom at φ = 0
/// (minimum for G > 0) and at φ = π/3 (saddle for G > 0).
fn ray_extrema(hbar_omega: f64, f: f64, g: f64) -> (f64, f64) {
    let e0 = radial_minimum(hbar_omega, f, g, 0.0).1;
    let e1 = radial_minimum(hbar_omega, f, g, PI / 3.0).1;
    (-e0, e1 - e0)
}

fn check_targets(e_jt: f64, barrier: f64, hbar_omega: f64) -> Result<()> {
    if !(hbar_omega.is_finite() && hbar_omega > 0.0) {
        return Err(Error::Infeasible(format!("ħω must be positive (got {hbar_omega} meV)")));
    }
    if !(e_jt.is_finite() && e_jt > 0.0) {
        return Err(Error::Infeasible(format!("E_JT must be positive (got {e_jt} meV)")));
    }
    if !(barrier.is_finite() && barrier >= 0.0) {
        return Err(Error::Infeasible(format!("barrier must be non-negative (got {barrier} meV)")));
    }
    // δ/E_JT = 4G/(ħω + 2G) < 1 for every bound potential (2G < ħω).
    if barrier >= e_jt {
        return Err(Error::Infeasible(format!(
            "barrier {barrier} meV must stay below E_JT = {e_jt} meV; larger warps need 2G ≥ ħω (unbound potential)"
        )));
    }
    Ok(())
}

/// Couplings (F ≥ 0, G ≥ 0) whose lower sheet has depth `e_jt` and barrier
/// `barrier`, by Newton iteration on the ray extrema from a coarse-grid seed.
pub fn fit_couplings(e_jt: f64, barrier: f64, hbar_omega: f64) -> Result<Couplings> {
    check_targets(e_jt, barrier, hbar_omega)?;
    if barrier == 0.0 {
        // Linear coupling alone: valley at ρ = F/ħω with depth F²/(2ħω).
        let f = (2.0 * e_jt * hbar_omega).sqrt();
        return Ok(Couplings { f, g: 0.0 });
    }
    let k = hbar_omega;
    let residual = |f: f64, g: f64| {
        let (e, b) = ray_extrema(k, f, g);
        (e / e_jt - 1.0, b / e_jt - barrier / e_jt)
    };

    // Seed: G/ħω on (0, ½), F/√(2E_JT ħω) on (0, 3].
    let f_scale = (2.0 * e_jt * k).sqrt();
    let mut seed = (f_scale, 0.0, f64::INFINITY);
    for i in 1..40 {
        let g = 0.5 * k * i as f64 / 40.0;
        for j in 1..=30 {
            let f = f_scale * 3.0 * j as f64 / 30.0;
            let (r1, r2) = residual(f, g);
            let n = r1.hypot(r2);
            if n < seed.2 {
                seed = (f, g, n);
            }
        }
    }

    let (mut f, mut g) = (seed.0, seed.1);
    let g_cap = 0.5 * k * (1.0 - 1e-9);
    for _ in 0..100 {
        let (r1, r2) = residual(f, g);
        if r1.hypot(r2) < FIT_TOL {
            return Ok(Couplings { f, g });
        }
        let hf = 1e-6 * f.abs().max(1e-3);
        let hg = 1e-6 * k;
        let (a1, a2) = residual(f + hf, g);
        let (b1, b2) = residual(f, g + hg);
        let j = [[(a1 - r1) / hf, (b1 - r1) / hg], [(a2 - r2) / hf, (b2 - r2) / hg]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let df = (j[1][1] * r1 - j[0][1] * r2) / det;
        let dg = (j[0][0] * r2 - j[1][0] * r1) / det;
        // Damp until the step stays in the bound region and reduces the residual.
        let mut t = 1.0;
        let before = r1.hypot(r2);
        loop {
            let (nf, ng) = (f - t * df, (g - t * dg).clamp(0.0, g_cap));
            let (s1, s2) = residual(nf, ng);
            if s1.hypot(s2) < before || t < 1e-6 {
                f = nf;
                g = ng;
                break;
            }
            t *= 0.5;
        }
    }
    let (r1, r2) = residual(f, g);
    Err(Error::Convergence(format!(
        "coupling fit stalled at F = {f:.6}, G = {g:.6} meV (relative residuals {r1:.2e}, {r2:.2e})"
    )))
}
