//! Discrete Wigner function of a periodic wave function.
//!
//! The state is interpolated spectrally onto a grid of `2n` points with spacing
//! `h = dq/2`, and `W(x_i, p_l)` is evaluated on the momentum lattice
//! `p_l = l·Δp/2`, `l = −n .. n−1`. On a ring the Wigner function carries a
//! second, interference-only sheet displaced by `L/2` from the first. It
//! integrates to zero but doubles `∫∫W²`, so the purity functional below is
//! normalized by `πk̄` rather than `2πk̄`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::fft::FftPair;
use crate::grid::SpatialGrid;
use crate::wave::WaveFunction;

#[derive(Clone, Debug)]
pub struct WignerFunction {
    grid: SpatialGrid,
    kbar: f64,
    q: Vec<f64>,
    p: Vec<f64>,
    /// Row-major, `values[i * p.len() + l]`.
    values: Vec<f64>,
}

/// Band-limited interpolation of `psi` onto the half-spaced grid.
pub fn interpolate_twice(psi: &WaveFunction) -> Vec<Complex64> {
    let n = psi.grid().n();
    let mut spec = psi.amplitudes().to_vec();
    FftPair::new(n).forward(&mut spec);
    let mut fine = vec![Complex64::default(); 2 * n];
    for (k, c) in spec.iter().enumerate() {
        let s = psi.grid().signed_index(k);
        fine[s.rem_euclid(2 * n as i64) as usize] = c * 2.0;
    }
    FftPair::new(2 * n).inverse(&mut fine);
    fine
}

pub fn wigner_of_wavefunction(psi: &WaveFunction) -> WignerFunction {
    let grid = *psi.grid();
    let kbar = psi.kbar();
    let n = grid.n();
    let m2 = 2 * n;
    let h = 0.5 * grid.dq();
    let fine = interpolate_twice(psi);
    let pair = FftPair::new(m2);
    let scale = 2.0 * h / (2.0 * PI * kbar);

    let rows: Vec<Vec<f64>> = (0..m2)
        .into_par_iter()
        .map_init(
            || (vec![Complex64::default(); m2], pair.scratch()),
            |(buf, scratch), i| {
                for (m, b) in buf.iter_mut().enumerate() {
                    let a = fine[(i + m) % m2];
                    let c = fine[(i + m2 - m) % m2];
                    *b = a.conj() * c;
                }
                // Σ_m f(m) e^{+iπ l m / n}: the unnormalized inverse transform
                pair.inverse_with(buf, scratch);
                let mut row = vec![0.0; m2];
                for (idx, v) in buf.iter().enumerate() {
                    let l = if idx < n { idx + n } else { idx - n };
                    row[l] = v.re * m2 as f64 * scale;
                }
                row
            },
        )
        .collect();

    let dp_half = 0.5 * grid.dp(kbar);
    WignerFunction {
        grid,
        kbar,
        q: (0..m2).map(|i| -0.5 * grid.length() + i as f64 * h).collect(),
        p: (0..m2).map(|l| (l as f64 - n as f64) * dp_half).collect(),
        values: rows.concat(),
    }
}

impl WignerFunction {
    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kbar(&self) -> f64 {
        self.kbar
    }

    #[inline]
    pub fn at(&self, i: usize, l: usize) -> f64 {
        self.values[i * self.p.len() + l]
    }

    pub fn dq(&self) -> f64 {
        0.5 * self.grid.dq()
    }

    pub fn dp(&self) -> f64 {
        0.5 * self.grid.dp(self.kbar)
    }

    /// `∫W dp` at every fine-grid position.
    pub fn position_marginal(&self) -> Vec<f64> {
        let dp = self.dp();
        self.values
            .chunks(self.p.len())
            .map(|row| row.iter().sum::<f64>() * dp)
            .collect()
    }

    /// `∫W dq` collected per momentum-comb cell, as a density on the comb
    /// `p_k = kΔp`, `k = −n/2 .. n/2−1`.
    pub fn momentum_marginal(&self) -> Vec<f64> {
        let np = self.p.len();
        let mut col = vec![0.0; np];
        for row in self.values.chunks(np) {
            for (c, v) in col.iter_mut().zip(row) {
                *c += v;
            }
        }
        let dq = self.dq();
        col.chunks(2).map(|pair| (pair[0] + pair[1]) * dq * 0.5).collect()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.dq() * self.dp()
    }

    /// Ring-normalized purity `πk̄ ∫∫W²`, equal to one for a pure state.
    pub fn purity(&self) -> f64 {
        PI * self.kbar * self.values.iter().map(|w| w * w).sum::<f64>() * self.dq() * self.dp()
    }
}
