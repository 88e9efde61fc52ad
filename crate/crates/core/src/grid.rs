use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic position grid covering `wells` whole 2π periods.
///
/// Points sit at `q_j = −L/2 + j·dq`, `j = 0..n`, so `q = 0` is the grid
/// point `n/2`. The conjugate momentum comb is `p_k = k̄·(2π/L)·k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpatialGrid {
    n: usize,
    wells: usize,
}

pub fn build_grid(n: usize, wells: usize) -> Result<SpatialGrid> {
    SpatialGrid::new(n, wells)
}

impl SpatialGrid {
    pub fn new(n: usize, wells: usize) -> Result<Self> {
        if n < 64 || !n.is_power_of_two() {
            return Err(Error::GridSize(n));
        }
        if wells == 0 {
            return Err(Error::ZeroWells);
        }
        Ok(SpatialGrid { n, wells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn wells(&self) -> usize {
        self.wells
    }

    pub fn length(&self) -> f64 {
        2.0 * PI * self.wells as f64
    }

    pub fn dq(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn position(&self, j: usize) -> f64 {
        -0.5 * self.length() + j as f64 * self.dq()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.position(j)).collect()
    }

    /// Momentum comb spacing `2π k̄ / L`.
    pub fn dp(&self, kbar: f64) -> f64 {
        2.0 * PI * kbar / self.length()
    }

    /// Signed comb index of FFT bin `k`.
    #[inline]
    pub fn signed_index(&self, k: usize) -> i64 {
        if k < self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    /// Momenta in FFT order.
    pub fn fft_momenta(&self, kbar: f64) -> Vec<f64> {
        let dp = self.dp(kbar);
        (0..self.n).map(|k| self.signed_index(k) as f64 * dp).collect()
    }

    /// Momenta in ascending order, `k = −n/2 .. n/2 − 1`.
    pub fn momenta(&self, kbar: f64) -> Vec<f64> {
        let dp = self.dp(kbar);
        let half = (self.n / 2) as i64;
        (-half..half).map(|k| k as f64 * dp).collect()
    }

    /// Largest momentum magnitude on the comb.
    pub fn p_max(&self, kbar: f64) -> f64 {
        (self.n / 2) as f64 * self.dp(kbar)
    }

    /// Fold `q` into the grid domain `[−L/2, L/2)`.
    pub fn fold(&self, q: f64) -> f64 {
        let l = self.length();
        (q + 0.5 * l).rem_euclid(l) - 0.5 * l
    }
}

/// Fold an angle into `[−π, π)`.
#[inline]
pub fn wrap_angle(q: f64) -> f64 {
    (q + PI).rem_euclid(2.0 * PI) - PI
}
