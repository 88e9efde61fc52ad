use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Forward and inverse plans of one length. The inverse is normalized by `1/n`
/// in [`FftPair::inverse`].
#[derive(Clone)]
pub struct FftPair {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch_len: usize,
}

impl FftPair {
    pub fn new(n: usize) -> Self {
        PLANNER.with(|p| {
            let mut p = p.borrow_mut();
            let fwd = p.plan_fft_forward(n);
            let inv = p.plan_fft_inverse(n);
            let scratch_len = fwd
                .get_inplace_scratch_len()
                .max(inv.get_inplace_scratch_len());
            FftPair {
                fwd,
                inv,
                scratch_len,
            }
        })
    }

    pub fn len(&self) -> usize {
        self.fwd.len()
    }

    pub fn scratch(&self) -> Vec<Complex64> {
        vec![Complex64::default(); self.scratch_len]
    }

    pub fn forward_with(&self, data: &mut [Complex64], scratch: &mut [Complex64]) {
        self.fwd.process_with_scratch(data, scratch);
    }

    pub fn inverse_with(&self, data: &mut [Complex64], scratch: &mut [Complex64]) {
        self.inv.process_with_scratch(data, scratch);
        let s = 1.0 / data.len() as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        let mut s = self.scratch();
        self.forward_with(data, &mut s);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        let mut s = self.scratch();
        self.inverse_with(data, &mut s);
    }
}

/// Angular wavenumbers `2π k / period` in FFT order.
pub fn wavenumbers(n: usize, period: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / period;
    (0..n)
        .map(|k| {
            let s = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
            s * base
        })
        .collect()
}
