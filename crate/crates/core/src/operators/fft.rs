use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Unnormalized forward / normalized inverse DFT on an N^d lattice stored
/// row-major (flat index = i_x + N·i_y).
#[derive(Clone)]
pub(crate) struct FftNd {
    dim: usize,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftNd {
    pub fn new(dim: usize, n: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftNd {
            dim,
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn forward(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        self.run(&self.forward, data, scratch);
    }

    pub fn inverse(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        self.run(&self.inverse, data, scratch);
        let s = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }

    fn run(&self, plan: &Arc<dyn Fft<f64>>, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        debug_assert_eq!(data.len(), self.len());
        let need = plan.get_inplace_scratch_len();
        if scratch.len() < need {
            scratch.resize(need, Complex64::new(0.0, 0.0));
        }
        plan.process_with_scratch(data, &mut scratch[..need]);
        if self.dim == 2 {
            transpose_square(data, self.n);
            plan.process_with_scratch(data, &mut scratch[..need]);
            transpose_square(data, self.n);
        }
    }
}

fn transpose_square(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn matches_naive_dft_2d() {
        let n = 6;
        let f = FftNd::new(2, n);
        let x: Vec<Complex64> = (0..n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut y = x.clone();
        let mut s = Vec::new();
        f.forward(&mut y, &mut s);
        for ky in 0..n {
            for kx in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for iy in 0..n {
                    for ix in 0..n {
                        let ph = -2.0 * PI * ((kx * ix + ky * iy) as f64) / n as f64;
                        acc += x[ix + n * iy] * Complex64::from_polar(1.0, ph);
                    }
                }
                assert!((acc - y[kx + n * ky]).norm() < 1e-10);
            }
        }
        f.inverse(&mut y, &mut s);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
