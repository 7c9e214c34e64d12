//! Linear-plus-quadratic e⊗E Hamiltonian in a circular Fock basis.
//!
//! With X = (a_x + a_x†)/√2, a_± = (a_x ∓ i a_y)/√2 and electronic states
//! e_± = (e_x ± i e_y)/√2,
//!
//!   H = ħω(n₊ + n₋ + 1) + [F (a₊ + a₋†) + G (a₋² + 2a₊†a₋ + a₊†²)] |+⟩⟨−| + h.c.
//!
//! which equals ħω(n_x + n_y + 1) + F(Xσ_z + Yσ_x) + G[(X² − Y²)σ_z − 2XYσ_x].
//! All matrix elements are real, and 2J = 2(n₊ − n₋) ± 1 is conserved mod 6.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const DEFAULT_NMAX: usize = 40;
pub const MIN_NMAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JtModel {
    pub hbar_omega: f64,
    pub f: f64,
    pub g: f64,
    pub n_max: usize,
}

impl JtModel {
    pub fn new(hbar_omega: f64, f: f64, g: f64, n_max: usize) -> Result<Self> {
        let m = JtModel {
            hbar_omega,
            f,
            g,
            n_max,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar_omega.is_finite() && self.hbar_omega > 0.0) {
            return Err(Error::invalid("ħω must be positive"));
        }
        if !self.f.is_finite() || !self.g.is_finite() {
            return Err(Error::invalid("couplings must be finite"));
        }
        if 2.0 * self.g.abs() >= self.hbar_omega {
            return Err(Error::invalid(format!(
                "|2G| = {} must stay below ħω = {} for a bound potential",
                2.0 * self.g.abs(),
                self.hbar_omega
            )));
        }
        if self.n_max < MIN_NMAX {
            return Err(Error::invalid(format!("n_max must be at least {MIN_NMAX}")));
        }
        Ok(())
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }
}

/// Symmetry sector, labelled by 2J mod 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    /// J ≡ 1/2
    Half,
    /// J ≡ 3/2
    ThreeHalves,
    /// J ≡ 5/2 ≡ −1/2
    MinusHalf,
}

impl Sector {
    pub const ALL: [Sector; 3] = [Sector::Half, Sector::ThreeHalves, Sector::MinusHalf];

    fn from_two_j(two_j: i64) -> Sector {
        match two_j.rem_euclid(6) {
            1 => Sector::Half,
            3 => Sector::ThreeHalves,
            5 => Sector::MinusHalf,
            _ => unreachable!("2J is odd"),
        }
    }
}

/// Basis state |n₊, n₋⟩ ⊗ e_τ with τ = ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub n_plus: usize,
    pub n_minus: usize,
    pub tau: i8,
}

impl BasisState {
    pub fn two_j(&self) -> i64 {
        2 * (self.n_plus as i64 - self.n_minus as i64) + self.tau as i64
    }

    pub fn sector(&self) -> Sector {
        Sector::from_two_j(self.two_j())
    }
}

/// All states with n₊ + n₋ ≤ n_max; dimension (n_max + 1)(n_max + 2).
pub fn basis(n_max: usize) -> Vec<BasisState> {
    let mut out = Vec::with_capacity((n_max + 1) * (n_max + 2));
    for total in 0..=n_max {
        for n_plus in 0..=total {
            for tau in [1i8, -1] {
                out.push(BasisState {
                    n_plus,
                    n_minus: total - n_plus,
                    tau,
                });
            }
        }
    }
    out
}

/// Components of O|n₊, n₋⟩ for O = F(a₊ + a₋†) + G(a₋² + 2a₊†a₋ + a₊†²).
fn raise_electronic(f: f64, g: f64, np: usize, nm: usize) -> Vec<((usize, usize), f64)> {
    let (p, m) = (np as f64, nm as f64);
    let mut out = Vec::with_capacity(5);
    if np > 0 {
        out.push(((np - 1, nm), f * p.sqrt()));
    }
    out.push(((np, nm + 1), f * (m + 1.0).sqrt()));
    if nm > 1 {
        out.push(((np, nm - 2), g * (m * (m - 1.0)).sqrt()));
    }
    if nm > 0 {
        out.push(((np + 1, nm - 1), 2.0 * g * ((p + 1.0) * m).sqrt()));
    }
    out.push(((np + 2, nm), g * ((p + 1.0) * (p + 2.0)).sqrt()));
    out
}

fn assemble(model: &JtModel, states: &[BasisState]) -> DMatrix<f64> {
    let index: std::collections::HashMap<BasisState, usize> =
        states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let n = states.len();
    let mut h = DMatrix::zeros(n, n);
    for (i, s) in states.iter().enumerate() {
        h[(i, i)] = model.hbar_omega * (s.n_plus + s.n_minus + 1) as f64;
        if s.tau != -1 {
            continue;
        }
        for ((np, nm), amp) in raise_electronic(model.f, model.g, s.n_plus, s.n_minus) {
            if amp == 0.0 || np + nm > model.n_max {
                continue;
            }
            let target = BasisState {
                n_plus: np,
                n_minus: nm,
                tau: 1,
            };
            if let Some(&j) = index.get(&target) {
                h[(j, i)] += amp;
                h[(i, j)] += amp;
            }
        }
    }
    h
}

/// Full Hamiltonian (meV) on [`basis`] ordering.
pub fn build_jt_hamiltonian(model: &JtModel) -> Result<(Vec<BasisState>, DMatrix<f64>)> {
    model.validate()?;
    let states = basis(model.n_max);
    let h = assemble(model, &states);
    Ok((states, h))
}

/// Hamiltonian restricted to one symmetry sector.
pub fn sector_hamiltonian(model: &JtModel, sector: Sector) -> Result<(Vec<BasisState>, DMatrix<f64>)> {
    model.validate()?;
    let states: Vec<BasisState> = basis(model.n_max).into_iter().filter(|s| s.sector() == sector).collect();
    let h = assemble(model, &states);
    Ok((states, h))
}
