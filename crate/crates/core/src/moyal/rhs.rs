use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::potential_and_force;
use crate::error::{Error, Result};
use crate::fft::{wavenumbers, FftPair};
use crate::params::Params;
use crate::wave::GaussianPacket;

/// Phase-space function on a rectangular grid, periodic in both directions
/// for the purpose of spectral derivatives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerGridState {
    q: Vec<f64>,
    p: Vec<f64>,
    q_period: f64,
    p_period: f64,
    /// Row-major, `values[iq * p.len() + ip]`.
    values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftMode {
    /// Momentum shifts as Fourier phase factors.
    Spectral,
    /// Momentum shifts as index offsets; needs `k̄/2` on the lattice.
    Grid,
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    (0..n).map(|i| lo + i as f64 * h).collect()
}

impl WignerGridState {
    pub fn from_fn(
        nq: usize,
        np: usize,
        q_range: (f64, f64),
        p_range: (f64, f64),
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        if nq < 4 || np < 4 {
            return Err(Error::invalid("grid", "need at least 4 points per axis"));
        }
        if !(q_range.1 > q_range.0) || !(p_range.1 > p_range.0) {
            return Err(Error::invalid("grid", "ranges must be increasing"));
        }
        let q = axis(q_range.0, q_range.1, nq);
        let p = axis(p_range.0, p_range.1, np);
        let mut values = Vec::with_capacity(nq * np);
        for &qq in &q {
            for &pp in &p {
                values.push(f(qq, pp));
            }
        }
        Ok(WignerGridState {
            q,
            p,
            q_period: q_range.1 - q_range.0,
            p_period: p_range.1 - p_range.0,
            values,
        })
    }

    /// Wigner function of a minimum-uncertainty Gaussian.
    pub fn gaussian(
        packet: GaussianPacket,
        kbar: f64,
        nq: usize,
        np: usize,
        q_range: (f64, f64),
        p_range: (f64, f64),
    ) -> Result<Self> {
        Self::from_fn(nq, np, q_range, p_range, |q, p| packet.wigner(q, p, kbar))
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dq(&self) -> f64 {
        self.q_period / self.q.len() as f64
    }

    pub fn dp(&self) -> f64 {
        self.p_period / self.p.len() as f64
    }

    #[inline]
    pub fn at(&self, iq: usize, ip: usize) -> f64 {
        self.values[iq * self.p.len() + ip]
    }

    fn like(&self, values: Vec<f64>) -> WignerGridState {
        WignerGridState {
            q: self.q.clone(),
            p: self.p.clone(),
            q_period: self.q_period,
            p_period: self.p_period,
            values,
        }
    }

    /// Apply a Fourier multiplier along `p` for every row.
    fn along_p(&self, mult: &[Complex64]) -> Vec<f64> {
        let np = self.p.len();
        let pair = FftPair::new(np);
        let rows: Vec<Vec<f64>> = self
            .values
            .par_chunks(np)
            .map_init(
                || (vec![Complex64::default(); np], pair.scratch()),
                |(buf, scratch), row| {
                    for (b, v) in buf.iter_mut().zip(row) {
                        *b = Complex64::new(*v, 0.0);
                    }
                    pair.forward_with(buf, scratch);
                    for (b, m) in buf.iter_mut().zip(mult) {
                        *b *= m;
                    }
                    pair.inverse_with(buf, scratch);
                    buf.iter().map(|z| z.re).collect()
                },
            )
            .collect();
        rows.concat()
    }

    /// Apply a Fourier multiplier along `q` for every column.
    fn along_q(&self, mult: &[Complex64]) -> Vec<f64> {
        let (nq, np) = (self.q.len(), self.p.len());
        let pair = FftPair::new(nq);
        let cols: Vec<Vec<f64>> = (0..np)
            .into_par_iter()
            .map_init(
                || (vec![Complex64::default(); nq], pair.scratch()),
                |(buf, scratch), ip| {
                    for (iq, b) in buf.iter_mut().enumerate() {
                        *b = Complex64::new(self.values[iq * np + ip], 0.0);
                    }
                    pair.forward_with(buf, scratch);
                    for (b, m) in buf.iter_mut().zip(mult) {
                        *b *= m;
                    }
                    pair.inverse_with(buf, scratch);
                    buf.iter().map(|z| z.re).collect()
                },
            )
            .collect();
        let mut out = vec![0.0; nq * np];
        for (ip, col) in cols.iter().enumerate() {
            for (iq, v) in col.iter().enumerate() {
                out[iq * np + ip] = *v;
            }
        }
        out
    }

    /// `∂^ν W / ∂p^ν`, spectrally, with the Nyquist mode dropped for odd `ν`.
    pub fn p_derivative(&self, order: u32) -> Vec<f64> {
        let np = self.p.len();
        let s = wavenumbers(np, self.p_period);
        let mult: Vec<Complex64> = s
            .iter()
            .enumerate()
            .map(|(k, &s)| {
                if order % 2 == 1 && k == np / 2 {
                    Complex64::default()
                } else {
                    Complex64::new(0.0, s).powu(order)
                }
            })
            .collect();
        self.along_p(&mult)
    }

    pub fn q_derivative(&self) -> Vec<f64> {
        let nq = self.q.len();
        let k = wavenumbers(nq, self.q_period);
        let mult: Vec<Complex64> = k
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                if i == nq / 2 {
                    Complex64::default()
                } else {
                    Complex64::new(0.0, k)
                }
            })
            .collect();
        self.along_q(&mult)
    }

    /// `W(q, p + shift)` on the same grid.
    fn shifted(&self, shift: f64, mode: ShiftMode) -> Result<Vec<f64>> {
        let np = self.p.len();
        match mode {
            ShiftMode::Spectral => {
                let s = wavenumbers(np, self.p_period);
                let mult: Vec<Complex64> = s
                    .iter()
                    .enumerate()
                    .map(|(k, &s)| {
                        if k == np / 2 {
                            Complex64::new((s * shift).cos(), 0.0)
                        } else {
                            Complex64::from_polar(1.0, s * shift)
                        }
                    })
                    .collect();
                Ok(self.along_p(&mult))
            }
            ShiftMode::Grid => {
                let dp = self.dp();
                let m = (shift / dp).round();
                if (shift / dp - m).abs() > 1e-9 {
                    return Err(Error::ShiftIncompatible { shift, dp });
                }
                let m = m as i64;
                let mut out = vec![0.0; self.values.len()];
                for (row_out, row) in out.chunks_mut(np).zip(self.values.chunks(np)) {
                    for (ip, v) in row_out.iter_mut().enumerate() {
                        *v = row[(ip as i64 + m).rem_euclid(np as i64) as usize];
                    }
                }
                Ok(out)
            }
        }
    }
}

fn finite(values: Vec<f64>) -> Result<Vec<f64>> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(values)
    } else {
        Err(Error::SpectralOverflow)
    }
}

/// `−p ∂W/∂q`.
pub fn streaming_term(w: &WignerGridState) -> WignerGridState {
    let dq = w.q_derivative();
    let np = w.p.len();
    let values = dq
        .iter()
        .enumerate()
        .map(|(i, d)| -w.p[i % np] * d)
        .collect();
    w.like(values)
}

/// `−p ∂W/∂q − F(q, t) ∂W/∂p`.
pub fn classical_liouville_rhs(w: &WignerGridState, t: f64, params: &Params) -> Result<WignerGridState> {
    let np = w.p.len();
    let dp = w.p_derivative(1);
    let stream = streaming_term(w);
    let force: Vec<f64> = w.q.iter().map(|&q| potential_and_force(q, t, params).1).collect();
    let values = stream
        .values
        .iter()
        .zip(&dp)
        .enumerate()
        .map(|(i, (s, d))| s - force[i / np] * d)
        .collect();
    Ok(w.like(finite(values)?))
}

/// Streaming plus the Moyal series truncated after odd order `order`:
/// `Σ_ν (−1)^((ν−1)/2) (k̄/2)^(ν−1) / ν! · ∂^νV/∂q^ν · ∂^νW/∂p^ν`.
pub fn moyal_series_rhs(
    w: &WignerGridState,
    t: f64,
    params: &Params,
    order: u32,
) -> Result<WignerGridState> {
    if order == 0 || order % 2 == 0 {
        return Err(Error::invalid("order", format!("{order} is not an odd number >= 1")));
    }
    let np = w.p.len();
    let a = params.amplitude(t);
    let half = 0.5 * params.kbar;
    let mut acc = streaming_term(w).values;
    let mut factorial = 1.0;
    for nu in 1..=order {
        factorial *= nu as f64;
        if nu % 2 == 0 {
            continue;
        }
        let sign = if (nu - 1) / 2 % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = sign * half.powi(nu as i32 - 1) / factorial;
        // V = −A cos q  ⇒  ∂^νV/∂q^ν = −A cos(q + νπ/2)
        let phase = nu as f64 * std::f64::consts::FRAC_PI_2;
        let dv: Vec<f64> = w.q.iter().map(|&q| -a * (q + phase).cos()).collect();
        let d = w.p_derivative(nu);
        for (i, (r, dw)) in acc.iter_mut().zip(&d).enumerate() {
            *r += coeff * dv[i / np] * dw;
        }
    }
    Ok(w.like(finite(acc)?))
}

/// Resummed series for the cosine potential:
/// `−p ∂W/∂q + A(t) sin q · [W(p + k̄/2) − W(p − k̄/2)] / k̄`.
pub fn moyal_shift_rhs(
    w: &WignerGridState,
    t: f64,
    params: &Params,
    mode: ShiftMode,
) -> Result<WignerGridState> {
    let np = w.p.len();
    let kb = params.kbar;
    let plus = w.shifted(0.5 * kb, mode)?;
    let minus = w.shifted(-0.5 * kb, mode)?;
    let stream = streaming_term(w);
    let dv: Vec<f64> = w.q.iter().map(|&q| -potential_and_force(q, t, params).1).collect();
    let values = stream
        .values
        .iter()
        .zip(plus.iter().zip(&minus))
        .enumerate()
        .map(|(i, (s, (a, b)))| s + dv[i / np] * (a - b) / kb)
        .collect();
    Ok(w.like(finite(values)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_periodic_function() {
        let w = WignerGridState::from_fn(32, 64, (0.0, 1.0), (-3.0, 3.0), |_, p| (p * std::f64::consts::PI / 3.0).sin()).unwrap();
        let d = w.p_derivative(1);
        for (i, v) in d.iter().enumerate() {
            let p = w.p()[i % 64];
            assert!((v - std::f64::consts::PI / 3.0 * (p * std::f64::consts::PI / 3.0).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn even_order_rejected() {
        let w = WignerGridState::from_fn(8, 8, (0.0, 1.0), (0.0, 1.0), |_, _| 0.0).unwrap();
        assert!(moyal_series_rhs(&w, 0.0, &Params::standard(), 2).is_err());
    }

    #[test]
    fn grid_shift_needs_lattice_multiple() {
        let w = WignerGridState::from_fn(8, 64, (0.0, 1.0), (-1.0, 1.0), |_, _| 0.0).unwrap();
        let p = Params::standard().with_kbar(0.1);
        assert!(matches!(
            moyal_shift_rhs(&w, 0.0, &p, ShiftMode::Grid),
            Err(Error::ShiftIncompatible { .. })
        ));
    }
}
