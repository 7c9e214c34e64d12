//! Three-dimensional complex FFTs on z-fastest arrays.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct Fft3 {
    dims: [usize; 3],
    forward: [Arc<dyn Fft<f64>>; 3],
    inverse: [Arc<dyn Fft<f64>>; 3],
}

impl Fft3 {
    pub fn new(dims: [usize; 3]) -> Self {
        let mut planner = FftPlanner::new();
        Fft3 {
            dims,
            forward: dims.map(|n| planner.plan_fft_forward(n)),
            inverse: dims.map(|n| planner.plan_fft_inverse(n)),
        }
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.forward);
    }

    /// Inverse transform including the 1/N normalization.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inverse);
        let s = 1.0 / self.len() as f64;
        for z in data.iter_mut() {
            *z *= s;
        }
    }

    fn run(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>; 3]) {
        let [n1, n2, n3] = self.dims;
        assert_eq!(data.len(), n1 * n2 * n3);
        // z is contiguous
        plans[2].process(data);
        // y: gather each (i, k) line
        let mut buf = vec![Complex64::new(0.0, 0.0); n1 * n2 * n3];
        for i in 0..n1 {
            for k in 0..n3 {
                for j in 0..n2 {
                    buf[(i * n3 + k) * n2 + j] = data[(i * n2 + j) * n3 + k];
                }
            }
        }
        plans[1].process(&mut buf);
        for i in 0..n1 {
            for k in 0..n3 {
                for j in 0..n2 {
                    data[(i * n2 + j) * n3 + k] = buf[(i * n3 + k) * n2 + j];
                }
            }
        }
        // x: gather each (j, k) line
        for j in 0..n2 {
            for k in 0..n3 {
                for i in 0..n1 {
                    buf[(j * n3 + k) * n1 + i] = data[(i * n2 + j) * n3 + k];
                }
            }
        }
        plans[0].process(&mut buf);
        for j in 0..n2 {
            for k in 0..n3 {
                for i in 0..n1 {
                    data[(i * n2 + j) * n3 + k] = buf[(j * n3 + k) * n1 + i];
                }
            }
        }
    }
}
