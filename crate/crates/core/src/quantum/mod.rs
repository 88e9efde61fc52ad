//! Strang-split spectral propagation of wave functions on the periodic grid.

mod evolve;
mod tunneling;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::FftPair;
use crate::grid::SpatialGrid;
use crate::params::Params;
use crate::wave::{band_edge_fraction, WaveFunction, BAND_EDGE_CUTOFF};

pub use evolve::{evolve_cycles, Evolution, QuantumOptions, Validation, ValidationReport, VALIDATION_TOLERANCE};
pub use tunneling::{tunneling_series, StartRule, TunnelingRun, XiChoice};

/// Reusable split-step kernel for one grid, `k̄` and drive.
pub struct SplitOperator {
    grid: SpatialGrid,
    params: Params,
    fft: FftPair,
    scratch: Vec<Complex64>,
    cos_q: Vec<f64>,
    half_p2: Vec<f64>,
    kinetic: Vec<(u64, Vec<Complex64>)>,
    check_band: bool,
}

impl SplitOperator {
    pub fn new(grid: SpatialGrid, params: &Params) -> Result<Self> {
        if !(params.kbar > 0.0) {
            return Err(Error::invalid("kbar", "must be > 0"));
        }
        let fft = FftPair::new(grid.n());
        let scratch = fft.scratch();
        Ok(SplitOperator {
            grid,
            params: *params,
            fft,
            scratch,
            cos_q: grid.positions().iter().map(|q| q.cos()).collect(),
            half_p2: grid.fft_momenta(params.kbar).iter().map(|p| 0.5 * p * p).collect(),
            kinetic: Vec::with_capacity(2),
            check_band: true,
        })
    }

    /// Disable the per-step band-edge check (used by convergence studies on
    /// deliberately coarse grids).
    pub fn without_band_check(mut self) -> Self {
        self.check_band = false;
        self
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    fn kinetic_phase(&mut self, dt: f64) -> usize {
        let key = dt.to_bits();
        if let Some(i) = self.kinetic.iter().position(|(k, _)| *k == key) {
            return i;
        }
        let kb = self.params.kbar;
        let phases = self
            .half_p2
            .iter()
            .map(|e| Complex64::from_polar(1.0, -e * dt / kb))
            .collect();
        if self.kinetic.len() == 2 {
            self.kinetic.remove(1);
        }
        self.kinetic.insert(0, (key, phases));
        0
    }

    fn potential_half(&self, amps: &mut [Complex64], t: f64, dt: f64) {
        let theta = self.params.amplitude(t) * 0.5 * dt / self.params.kbar;
        for (a, c) in amps.iter_mut().zip(&self.cos_q) {
            *a *= Complex64::from_polar(1.0, theta * c);
        }
    }

    /// One Strang step `t → t + dt` in place.
    pub fn step(&mut self, psi: &mut WaveFunction, t: f64, dt: f64) -> Result<()> {
        if !(dt > 0.0) {
            return Err(Error::invalid("dt", format!("{dt} is not > 0")));
        }
        let k = self.kinetic_phase(dt);
        let amps = psi.amplitudes_mut();
        self.potential_half(amps, t + 0.25 * dt, dt);
        self.fft.forward_with(amps, &mut self.scratch);
        if self.check_band {
            let fraction = band_edge_fraction(&self.grid, amps);
            if fraction > BAND_EDGE_CUTOFF {
                return Err(Error::BandEdge {
                    fraction,
                    cutoff: BAND_EDGE_CUTOFF,
                });
            }
        }
        for (a, ph) in amps.iter_mut().zip(&self.kinetic[k].1) {
            *a *= ph;
        }
        self.fft.inverse_with(amps, &mut self.scratch);
        self.potential_half(amps, t + 0.75 * dt, dt);
        Ok(())
    }

    /// Advance from `t0` to `t1` in equal steps no longer than
    /// `2π / steps_per_cycle`.
    pub fn advance(
        &mut self,
        psi: &mut WaveFunction,
        t0: f64,
        t1: f64,
        steps_per_cycle: usize,
    ) -> Result<()> {
        let span = t1 - t0;
        if span < 0.0 {
            return Err(Error::invalid("t1", "must not precede t0"));
        }
        if span == 0.0 {
            return Ok(());
        }
        let nominal = 2.0 * std::f64::consts::PI / steps_per_cycle as f64;
        let steps = (span / nominal - 1e-9).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        for i in 0..steps {
            self.step(psi, t0 + i as f64 * h, h)?;
        }
        Ok(())
    }
}

/// Single Strang step on a copy of `psi`.
pub fn split_step(psi: &WaveFunction, t: f64, dt: f64, params: &Params) -> Result<WaveFunction> {
    let mut op = SplitOperator::new(*psi.grid(), &params.with_kbar(psi.kbar()))?;
    let mut out = psi.clone();
    op.step(&mut out, t, dt)?;
    Ok(out)
}

/// `⟨p²/2 − A(t) cos q⟩`.
pub fn energy(psi: &WaveFunction, t: f64, params: &Params) -> f64 {
    let phi = psi.momentum_representation();
    let kin: f64 = phi
        .p
        .iter()
        .zip(&phi.amps)
        .map(|(p, a)| 0.5 * p * p * a.norm_sqr())
        .sum::<f64>()
        * phi.dp;
    let g = psi.grid();
    let pot: f64 = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(j, a)| -g.position(j).cos() * a.norm_sqr())
        .sum::<f64>()
        * g.dq();
    kin + params.amplitude(t) * pot
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use crate::wave::{init_packet, GaussianPacket};

    #[test]
    fn step_is_unitary() {
        let g = build_grid(512, 4).unwrap();
        let p = Params::standard();
        let psi = init_packet(GaussianPacket::new(0.2, 1.0, 1.0), g, p.kbar).unwrap();
        let out = split_step(&psi, 0.3, 0.01, &p).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_dt() {
        let g = build_grid(64, 1).unwrap();
        let p = Params::standard();
        let psi = init_packet(GaussianPacket::new(0.0, 0.0, 1.0), g, 1.0).unwrap();
        assert!(split_step(&psi, 0.0, 0.0, &p.with_kbar(1.0)).is_err());
    }
}
