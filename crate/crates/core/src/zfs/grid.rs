//! Complex scalar fields on uniform periodic grids.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Allowed deviation of ⟨ψ|ψ⟩ from one.
pub const NORM_TOL: f64 = 1e-6;

/// An orbital sampled on an `n1 × n2 × n3` grid spanning the cell whose
/// rows are the lattice vectors (Å). Values are stored z-fastest:
/// `index = (i * n2 + j) * n3 + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOrbital {
    pub label: String,
    pub cell: Matrix3<f64>,
    pub dims: [usize; 3],
    pub values: Vec<Complex64>,
}

impl GridOrbital {
    pub fn new(label: impl Into<String>, cell: Matrix3<f64>, dims: [usize; 3], values: Vec<Complex64>) -> Result<Self> {
        let label = label.into();
        if dims.contains(&0) {
            return Err(Error::invalid(format!("orbital `{label}` has an empty grid")));
        }
        let n = dims[0] * dims[1] * dims[2];
        if values.len() != n {
            return Err(Error::invalid(format!(
                "orbital `{label}`: {} values for a {}x{}x{} grid",
                values.len(),
                dims[0],
                dims[1],
                dims[2]
            )));
        }
        if cell.determinant().abs() <= 0.0 || !cell.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid(format!("orbital `{label}` has a degenerate cell")));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid(format!("orbital `{label}` has non-finite values")));
        }
        Ok(GridOrbital {
            label,
            cell,
            dims,
            values,
        })
    }

    /// Samples `f(r)` at every grid point.
    pub fn from_fn(
        label: impl Into<String>,
        cell: Matrix3<f64>,
        dims: [usize; 3],
        f: impl Fn(Vector3<f64>) -> Complex64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    values.push(f(grid_point(&cell, dims, [i, j, k])));
                }
            }
        }
        GridOrbital::new(label, cell, dims, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn volume_element(&self) -> f64 {
        self.cell.determinant().abs() / self.len() as f64
    }

    pub fn position(&self, idx: [usize; 3]) -> Vector3<f64> {
        grid_point(&self.cell, self.dims, idx)
    }

    /// ⟨ψ|ψ⟩ under the uniform (trapezoidal, periodic) measure.
    pub fn norm_squared(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.volume_element()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_squared();
        if n <= 0.0 {
            return Err(Error::Normalization { label: self.label, norm: n });
        }
        let s = 1.0 / n.sqrt();
        for z in &mut self.values {
            *z *= s;
        }
        Ok(self)
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = self.norm_squared();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization {
                label: self.label.clone(),
                norm: n,
            });
        }
        Ok(())
    }

    pub fn same_grid(&self, other: &GridOrbital) -> bool {
        self.dims == other.dims && (self.cell - other.cell).abs().max() <= 1e-9
    }

    /// Inner product ⟨self|other⟩.
    pub fn overlap(&self, other: &GridOrbital) -> Result<Complex64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch(format!("`{}` vs `{}`", self.label, other.label)));
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.volume_element())
    }

    /// |ψ|² centroid, ignoring periodic wrap-around.
    pub fn centroid(&self) -> Vector3<f64> {
        let mut c = Vector3::zeros();
        let mut w = 0.0;
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    let p = self.values[(i * self.dims[1] + j) * self.dims[2] + k].norm_sqr();
                    c += self.position([i, j, k]) * p;
                    w += p;
                }
            }
        }
        c / w
    }
}

fn grid_point(cell: &Matrix3<f64>, dims: [usize; 3], idx: [usize; 3]) -> Vector3<f64> {
    let frac = Vector3::new(
        idx[0] as f64 / dims[0] as f64,
        idx[1] as f64 / dims[1] as f64,
        idx[2] as f64 / dims[2] as f64,
    );
    cell.transpose() * frac
}

/// Normalized s-like Gaussian whose density |ψ|² has standard deviation
/// `sigma` (Å) per Cartesian direction.
pub fn gaussian_orbital(
    label: impl Into<String>,
    cell: Matrix3<f64>,
    dims: [usize; 3],
    center: Vector3<f64>,
    sigma: f64,
) -> Result<GridOrbital> {
    if !(sigma > 0.0) {
        return Err(Error::invalid("Gaussian width must be positive"));
    }
    GridOrbital::from_fn(label, cell, dims, |r| {
        let d = minimum_image(&cell, r - center);
        Complex64::new((-d.norm_squared() / (4.0 * sigma * sigma)).exp(), 0.0)
    })?
    .normalized()
}

/// Normalized p-like orbital (u·δr) exp(−δr²/4σ²) pointing along `axis`.
pub fn p_orbital(
    label: impl Into<String>,
    cell: Matrix3<f64>,
    dims: [usize; 3],
    center: Vector3<f64>,
    axis: Vector3<f64>,
    sigma: f64,
) -> Result<GridOrbital> {
    if !(sigma > 0.0) || axis.norm() == 0.0 {
        return Err(Error::invalid("p orbital needs a positive width and a non-zero axis"));
    }
    let u = axis.normalize();
    GridOrbital::from_fn(label, cell, dims, |r| {
        let d = minimum_image(&cell, r - center);
        Complex64::new(u.dot(&d) * (-d.norm_squared() / (4.0 * sigma * sigma)).exp(), 0.0)
    })?
    .normalized()
}

/// Wraps a Cartesian displacement to fractional coordinates in [−½, ½).
pub fn minimum_image(cell: &Matrix3<f64>, d: Vector3<f64>) -> Vector3<f64> {
    let inv = cell.transpose().try_inverse().expect("non-degenerate cell");
    let mut f = inv * d;
    for x in f.iter_mut() {
        *x -= (*x + 0.5).floor();
    }
    cell.transpose() * f
}
