//! Spin Hamiltonian assembly and dense Hermitian diagonalization.

use nalgebra::{SymmetricEigen, Vector3};
use num_complex::Complex64;

use super::operators::{embed, spin_matrices, CMatrix};
use super::system::{NucleusSpec, SpinSystem};
use crate::error::{Error, Result};
use crate::units::{BOHR_MHZ_PER_MT, NUCLEAR_MHZ_PER_MT};

/// Largest product-space dimension accepted.
pub const DIMENSION_CAP: usize = 4096;

/// Hamiltonian in MHz on electron ⊗ nuclei, with the electron spin
/// operators embedded in the same space.
#[derive(Debug, Clone)]
pub struct SpinHamiltonian {
    pub matrix: CMatrix,
    /// Local dimensions: electron first, then each included nucleus.
    pub dims: Vec<usize>,
    /// `S_x, S_y, S_z` on the full space.
    pub electron_ops: [CMatrix; 3],
    /// Indices (into the system's nuclei) of the nuclei in the product space.
    pub included: Vec<usize>,
    /// Electron-only part (zero-field plus Zeeman) on the electron space.
    pub electron_only: CMatrix,
}

impl SpinHamiltonian {
    /// ⟨M⟩ and ⟨M²⟩ for each column of `states`, with M = Σ_k u·I_k over
    /// the exactly treated nuclei.
    pub fn nuclear_projection(&self, states: &CMatrix, u: &Vector3<f64>) -> (Vec<f64>, Vec<f64>) {
        let dim = states.nrows();
        let mut op = CMatrix::zeros(dim, dim);
        for site in 1..self.dims.len() {
            let i_local = spin_matrices(self.dims[site] as u32 - 1);
            let local = &i_local[0] * c(u.x) + &i_local[1] * c(u.y) + &i_local[2] * c(u.z);
            op += embed(&self.dims, &[(site, &local)]);
        }
        let projected = &op * states;
        let mean = (0..states.ncols())
            .map(|k| states.column(k).dotc(&projected.column(k)).re)
            .collect();
        let square = (0..states.ncols()).map(|k| projected.column(k).norm_squared()).collect();
        (mean, square)
    }

    /// For each column of `states`, the index of the electron-only
    /// eigenstate (ascending energy) carrying most of its weight.
    pub fn electron_labels(&self, states: &CMatrix) -> Result<Vec<usize>> {
        let basis = eigensolve(&self.electron_only)?.states;
        let d_e = self.dims[0];
        let rest = states.nrows() / d_e;
        Ok((0..states.ncols())
            .map(|k| {
                let v = states.column(k);
                let weights = (0..d_e).map(|l| {
                    (0..rest)
                        .map(|r| {
                            (0..d_e)
                                .map(|e| basis[(e, l)].conj() * v[e * rest + r])
                                .sum::<Complex64>()
                                .norm_sqr()
                        })
                        .sum::<f64>()
                });
                weights
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(l, _)| l)
                    .unwrap_or(0)
            })
            .collect())
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// H = S·D·S + μ_B/h B·g·S + Σ_k S·A_k·I_k − Σ_k g_n,k μ_N/h B·I_k.
///
/// With `core_only` the perturbative nuclei are left out; otherwise every
/// nucleus is treated exactly.
pub fn build_hamiltonian(sys: &SpinSystem, b_mt: &Vector3<f64>, core_only: bool) -> Result<SpinHamiltonian> {
    let included: Vec<usize> = sys
        .nuclei
        .iter()
        .enumerate()
        .filter(|(_, n)| n.core || !core_only)
        .map(|(i, _)| i)
        .collect();
    let mut dims = vec![sys.electron_multiplicity()];
    dims.extend(included.iter().map(|&i| sys.nuclei[i].multiplicity()));
    let dim = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d).filter(|&p| p <= DIMENSION_CAP))
        .ok_or_else(|| Error::DimensionCap {
            dim: dims.iter().map(|&d| d as f64).product::<f64>() as usize,
            cap: DIMENSION_CAP,
        })?;

    let s_local = spin_matrices(sys.two_s);
    let electron_ops: [CMatrix; 3] = std::array::from_fn(|a| embed(&dims, &[(0, &s_local[a])]));

    let mut h = CMatrix::zeros(dim, dim);
    // electron-only part on the small space, then lifted once
    let d_e = dims[0];
    let mut h_e = CMatrix::zeros(d_e, d_e);
    for a in 0..3 {
        for b in 0..3 {
            if sys.zfs[(a, b)] != 0.0 {
                h_e += &s_local[a] * &s_local[b] * c(sys.zfs[(a, b)]);
            }
        }
    }
    let zeeman = sys.g.transpose() * b_mt * BOHR_MHZ_PER_MT;
    for (b, op) in s_local.iter().enumerate() {
        if zeeman[b] != 0.0 {
            h_e += op * c(zeeman[b]);
        }
    }
    h += embed(&dims, &[(0, &h_e)]);
    let electron_only = h_e;

    for (site, &k) in included.iter().enumerate() {
        let site = site + 1;
        let nuc: &NucleusSpec = &sys.nuclei[k];
        let i_local = spin_matrices(nuc.two_i);
        for a in 0..3 {
            for b in 0..3 {
                let v = nuc.a[(a, b)];
                if v != 0.0 {
                    h += embed(&dims, &[(0, &s_local[a]), (site, &i_local[b])]) * c(v);
                }
            }
        }
        let mut h_n = CMatrix::zeros(dims[site], dims[site]);
        for (b, op) in i_local.iter().enumerate() {
            let v = -nuc.g_n * NUCLEAR_MHZ_PER_MT * b_mt[b];
            if v != 0.0 {
                h_n += op * c(v);
            }
        }
        if h_n.iter().any(|z| z.norm() != 0.0) {
            h += embed(&dims, &[(site, &h_n)]);
        }
    }

    Ok(SpinHamiltonian {
        matrix: h,
        dims,
        electron_ops,
        included,
        electron_only,
    })
}

/// Ascending levels (MHz) and the matching orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub levels: Vec<f64>,
    pub states: CMatrix,
}

impl EigenSystem {
    /// Largest ‖Hv − λv‖ over all pairs.
    pub fn max_residual(&self, h: &CMatrix) -> f64 {
        (0..self.levels.len())
            .map(|k| {
                let v = self.states.column(k);
                (h * v - v * c(self.levels[k])).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub fn eigensolve(h: &CMatrix) -> Result<EigenSystem> {
    let n = h.nrows();
    if n == 0 || n != h.ncols() {
        return Err(Error::invalid("Hamiltonian must be a non-empty square matrix"));
    }
    let eig = SymmetricEigen::try_new(h.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::Convergence(format!("{n}x{n} Hermitian matrix")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let levels = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let states = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    Ok(EigenSystem { levels, states })
}
