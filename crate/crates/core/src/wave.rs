//! Wave functions on the periodic grid and squeezed Gaussian packets.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::FftPair;
use crate::grid::SpatialGrid;

/// Band-edge occupancy above which propagation is aborted.
pub const BAND_EDGE_CUTOFF: f64 = 1e-8;
/// Fraction of the momentum band (at each end) counted as the band edge.
pub const BAND_EDGE_FRACTION: f64 = 0.05;

/// Minimum-uncertainty Gaussian with centre `(q0, p0)` and squeeze `xi`.
///
/// Position variance `k̄/(2ξ)`, momentum variance `k̄ξ/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    pub q0: f64,
    pub p0: f64,
    pub xi: f64,
}

impl GaussianPacket {
    pub fn new(q0: f64, p0: f64, xi: f64) -> Self {
        GaussianPacket { q0, p0, xi }
    }

    pub fn var_q(&self, kbar: f64) -> f64 {
        kbar / (2.0 * self.xi)
    }

    pub fn var_p(&self, kbar: f64) -> f64 {
        kbar * self.xi / 2.0
    }

    /// Wigner function of the packet, evaluated in closed form.
    pub fn wigner(&self, q: f64, p: f64, kbar: f64) -> f64 {
        let dq = q - self.q0;
        let dp = p - self.p0;
        (-(self.xi / kbar) * dq * dq - dp * dp / (kbar * self.xi)).exp()
            / (std::f64::consts::PI * kbar)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    grid: SpatialGrid,
    kbar: f64,
    amps: Vec<Complex64>,
}

/// Momentum-space amplitudes on the comb, ascending in `p`, normalized so that
/// `Σ |φ_k|² Δp = 1` for a normalized state.
#[derive(Clone, Debug)]
pub struct MomentumAmplitudes {
    pub p: Vec<f64>,
    pub amps: Vec<Complex64>,
    pub dp: f64,
}

impl MomentumAmplitudes {
    pub fn density(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean_p: f64,
    pub var_p: f64,
    pub mean_q: f64,
    pub var_q: f64,
}

/// Sample a normalized Gaussian packet on `grid`.
pub fn init_packet(packet: GaussianPacket, grid: SpatialGrid, kbar: f64) -> Result<WaveFunction> {
    if !(packet.xi > 0.0) {
        return Err(Error::invalid("xi", format!("{} is not > 0", packet.xi)));
    }
    if !(kbar > 0.0) {
        return Err(Error::invalid("kbar", format!("{kbar} is not > 0")));
    }
    let width = packet.var_q(kbar).sqrt();
    if width < 4.0 * grid.dq() {
        return Err(Error::PacketUnresolved {
            width,
            dq: grid.dq(),
        });
    }
    if width > grid.length() / 8.0 {
        return Err(Error::PacketWraps {
            width,
            length: grid.length(),
        });
    }
    let var_q = packet.var_q(kbar);
    let amps = grid
        .positions()
        .into_iter()
        .map(|q| {
            // Minimum-image distance keeps packets near the seam intact.
            let d = grid.fold(q - packet.q0);
            let env = (-d * d / (4.0 * var_q)).exp();
            Complex64::from_polar(env, packet.p0 * d / kbar)
        })
        .collect();
    let mut psi = WaveFunction { grid, kbar, amps };
    psi.normalize();
    psi.check_band_edge()?;
    Ok(psi)
}

impl WaveFunction {
    /// Wrap raw position amplitudes. The state is normalized on construction.
    pub fn from_amplitudes(grid: SpatialGrid, kbar: f64, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.n() {
            return Err(Error::invalid(
                "amps",
                format!("expected {} amplitudes, got {}", grid.n(), amps.len()),
            ));
        }
        let mut psi = WaveFunction { grid, kbar, amps };
        if psi.norm() == 0.0 {
            return Err(Error::invalid("amps", "zero state"));
        }
        psi.normalize();
        Ok(psi)
    }

    /// Build a state from momentum amplitudes given in ascending comb order.
    pub fn from_momentum(grid: SpatialGrid, kbar: f64, phi: &[Complex64]) -> Result<Self> {
        let n = grid.n();
        if phi.len() != n {
            return Err(Error::invalid("phi", "length does not match grid"));
        }
        let c = momentum_scale(&grid, kbar);
        let mut buf = vec![Complex64::default(); n];
        for (i, a) in phi.iter().enumerate() {
            let k = i as i64 - (n / 2) as i64;
            let slot = k.rem_euclid(n as i64) as usize;
            // e^{-i p q_0 / k̄} with q_0 = −L/2 gives (−1)^k.
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            buf[slot] = a * (sign / c);
        }
        FftPair::new(n).inverse(&mut buf);
        Self::from_amplitudes(grid, kbar, buf)
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn kbar(&self) -> f64 {
        self.kbar
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// `Σ |ψ_j|² dq`.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dq()
    }

    pub fn normalize(&mut self) {
        let s = 1.0 / self.norm().sqrt();
        self.amps.iter_mut().for_each(|a| *a *= s);
    }

    pub fn position_density(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn momentum_representation(&self) -> MomentumAmplitudes {
        let n = self.grid.n();
        let mut buf = self.amps.clone();
        FftPair::new(n).forward(&mut buf);
        let c = momentum_scale(&self.grid, self.kbar);
        let dp = self.grid.dp(self.kbar);
        let half = (n / 2) as i64;
        let mut p = Vec::with_capacity(n);
        let mut amps = Vec::with_capacity(n);
        for k in -half..half {
            let slot = k.rem_euclid(n as i64) as usize;
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            p.push(k as f64 * dp);
            amps.push(buf[slot] * (sign * c));
        }
        MomentumAmplitudes { p, amps, dp }
    }

    /// Momentum and position moments. Position moments use the grid domain
    /// `[−L/2, L/2)` without unwrapping.
    pub fn moments(&self) -> Moments {
        let phi = self.momentum_representation();
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for (p, a) in phi.p.iter().zip(&phi.amps) {
            let w = a.norm_sqr();
            s0 += w;
            s1 += w * p;
            s2 += w * p * p;
        }
        let mean_p = s1 / s0;
        let var_p = (s2 / s0 - mean_p * mean_p).max(0.0);

        let (mut r0, mut r1, mut r2) = (0.0, 0.0, 0.0);
        for (j, a) in self.amps.iter().enumerate() {
            let q = self.grid.position(j);
            let w = a.norm_sqr();
            r0 += w;
            r1 += w * q;
            r2 += w * q * q;
        }
        let mean_q = r1 / r0;
        let var_q = (r2 / r0 - mean_q * mean_q).max(0.0);
        Moments {
            mean_p,
            var_p,
            mean_q,
            var_q,
        }
    }

    /// Probability in the outer [`BAND_EDGE_FRACTION`] of the momentum band.
    pub fn band_edge_occupancy(&self) -> f64 {
        let mut buf = self.amps.clone();
        FftPair::new(self.grid.n()).forward(&mut buf);
        band_edge_fraction(&self.grid, &buf)
    }

    pub fn check_band_edge(&self) -> Result<()> {
        let fraction = self.band_edge_occupancy();
        if fraction > BAND_EDGE_CUTOFF {
            return Err(Error::BandEdge {
                fraction,
                cutoff: BAND_EDGE_CUTOFF,
            });
        }
        Ok(())
    }

    /// Parity image `ψ(−q)`.
    pub fn reflected(&self) -> WaveFunction {
        let n = self.grid.n();
        let amps = (0..n).map(|j| self.amps[(n - j) % n]).collect();
        WaveFunction {
            grid: self.grid,
            kbar: self.kbar,
            amps,
        }
    }

    /// Max-norm distance between amplitudes of two states on the same grid.
    pub fn max_abs_diff(&self, other: &WaveFunction) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `φ_k = c (−1)^k X_k` with `c = dq/√(2πk̄)`.
fn momentum_scale(grid: &SpatialGrid, kbar: f64) -> f64 {
    grid.dq() / (2.0 * std::f64::consts::PI * kbar).sqrt()
}

/// Occupied fraction of the outer band given FFT-ordered momentum amplitudes.
pub(crate) fn band_edge_fraction(grid: &SpatialGrid, spectrum: &[Complex64]) -> f64 {
    let n = grid.n();
    let limit = (1.0 - BAND_EDGE_FRACTION) * (n / 2) as f64;
    let (mut edge, mut total) = (0.0, 0.0);
    for (k, a) in spectrum.iter().enumerate() {
        let w = a.norm_sqr();
        total += w;
        if grid.signed_index(k).unsigned_abs() as f64 > limit {
            edge += w;
        }
    }
    edge / total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;

    fn packet_state(p0: f64) -> WaveFunction {
        let g = build_grid(1024, 4).unwrap();
        init_packet(GaussianPacket::new(0.0, p0, 1.0), g, 0.25).unwrap()
    }

    #[test]
    fn packet_normalized_and_centred() {
        let psi = packet_state(1.03);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        let m = psi.moments();
        assert!((m.mean_p - 1.03).abs() < 1e-8, "{}", m.mean_p);
        assert!((m.var_p - 0.125).abs() < 1e-6, "{}", m.var_p);
        assert!(m.mean_q.abs() < 1e-10);
    }

    #[test]
    fn minimum_uncertainty_product() {
        let m = packet_state(0.0).moments();
        assert!((m.var_q * m.var_p - 0.015625).abs() < 1e-6);
    }

    #[test]
    fn plane_wave_occupies_single_bin() {
        let g = build_grid(128, 2).unwrap();
        let kbar = 0.3;
        let j = 5;
        let pj = j as f64 * g.dp(kbar);
        let amps = g
            .positions()
            .iter()
            .map(|q| Complex64::from_polar(1.0, pj * q / kbar))
            .collect();
        let psi = WaveFunction::from_amplitudes(g, kbar, amps).unwrap();
        let phi = psi.momentum_representation();
        let dens = phi.density();
        let imax = (0..dens.len()).max_by(|&a, &b| dens[a].total_cmp(&dens[b])).unwrap();
        assert!((phi.p[imax] - pj).abs() < 1e-12);
        let rest: f64 = dens.iter().enumerate().filter(|&(i, _)| i != imax).map(|(_, d)| d).sum();
        assert!(rest < 1e-20);
    }

    #[test]
    fn gaussian_momentum_density_is_gaussian() {
        let psi = packet_state(0.5);
        let phi = psi.momentum_representation();
        let vp = 0.125;
        for (p, a) in phi.p.iter().zip(&phi.amps) {
            let expect = (-(p - 0.5).powi(2) / (2.0 * vp)).exp() / (2.0 * std::f64::consts::PI * vp).sqrt();
            assert!((a.norm_sqr() - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn displacement_shifts_mean() {
        let a = packet_state(0.3).moments().mean_p;
        let b = packet_state(0.3 + 0.4).moments().mean_p;
        assert!((b - a - 0.4).abs() < 1e-10);
    }

    #[test]
    fn symmetric_superposition_has_zero_mean() {
        let g = build_grid(1024, 4).unwrap();
        let a = init_packet(GaussianPacket::new(-2.0, 1.0, 1.0), g, 0.25).unwrap();
        let b = init_packet(GaussianPacket::new(2.0, -1.0, 1.0), g, 0.25).unwrap();
        let amps = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x + y).collect();
        let psi = WaveFunction::from_amplitudes(g, 0.25, amps).unwrap();
        assert!(psi.moments().mean_p.abs() < 1e-8);
    }

    #[test]
    fn rejects_unresolvable_or_wrapping_packets() {
        let g = build_grid(64, 4).unwrap();
        assert!(matches!(
            init_packet(GaussianPacket::new(0.0, 0.0, 1.0), g, 0.01),
            Err(Error::PacketUnresolved { .. })
        ));
        let g = build_grid(1024, 1).unwrap();
        assert!(matches!(
            init_packet(GaussianPacket::new(0.0, 0.0, 0.01), g, 0.25),
            Err(Error::PacketWraps { .. })
        ));
    }

    #[test]
    fn reflection_is_involution() {
        let psi = packet_state(0.7);
        assert_eq!(psi.reflected().reflected(), psi);
        assert!((psi.reflected().moments().mean_p + 0.7).abs() < 1e-10);
    }
}
