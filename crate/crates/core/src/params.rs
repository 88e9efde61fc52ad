//! Model parameters of the amplitude-modulated standing wave.
//!
//! All quantities are scaled and dimensionless. The Hamiltonian is
//! `H = p²/2 − κ(1 − 2ε m(t)) cos q` with `m(t) = cos t`, `sin t` or `0`
//! depending on [`Modulation`], and `[q, p] = i k̄`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Time dependence of the standing-wave amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modulation {
    /// `1 − 2ε cos t`, stroboscopic snapshots at `t = 2nπ`.
    Cos,
    /// `1 − 2ε sin t`, stroboscopic snapshots at `t = π/2 + 2nπ`.
    Sin,
    /// Static lattice; ε is ignored.
    Unmodulated,
}

impl Modulation {
    /// Drive phase at which stroboscopic snapshots are taken.
    pub fn snapshot_phase(self) -> f64 {
        match self {
            Modulation::Sin => PI / 2.0,
            Modulation::Cos | Modulation::Unmodulated => 0.0,
        }
    }

    fn shape(self, t: f64) -> f64 {
        match self {
            Modulation::Cos => t.cos(),
            Modulation::Sin => t.sin(),
            Modulation::Unmodulated => 0.0,
        }
    }
}

/// Distribution of the projected spontaneous-emission recoil `u ∈ [−1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoilModel {
    /// Dipole pattern, density `3/8 (1 + u²)`.
    Dipole,
    Uniform,
    Off,
}

/// Spontaneous/stimulated recoil events shared by quantum trajectories and
/// classical ensembles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpontaneousSettings {
    /// Events per unit scaled time.
    pub rate: f64,
    pub recoil: RecoilModel,
    /// Adds a ±1 photon kick with equal probability to every event.
    #[serde(default)]
    pub include_stimulated: bool,
}

impl SpontaneousSettings {
    pub const OFF: SpontaneousSettings = SpontaneousSettings {
        rate: 0.0,
        recoil: RecoilModel::Off,
        include_stimulated: false,
    };

    pub fn new(rate: f64, recoil: RecoilModel, include_stimulated: bool) -> Result<Self> {
        let s = SpontaneousSettings {
            rate,
            recoil,
            include_stimulated,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rate >= 0.0) || !self.rate.is_finite() {
            return Err(Error::invalid("spont.rate", format!("{} is not >= 0", self.rate)));
        }
        let off = self.recoil == RecoilModel::Off;
        if off != (self.rate == 0.0) {
            return Err(Error::invalid(
                "spont.recoil",
                "recoil model must be `off` exactly when the rate is zero",
            ));
        }
        Ok(())
    }

    pub fn is_off(&self) -> bool {
        self.rate == 0.0
    }
}

impl Default for SpontaneousSettings {
    fn default() -> Self {
        Self::OFF
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Well depth κ.
    pub kappa: f64,
    /// Modulation strength ε.
    pub epsilon: f64,
    /// Scaled Planck constant k̄.
    pub kbar: f64,
    pub modulation: Modulation,
    #[serde(default)]
    pub spont: SpontaneousSettings,
}

impl Params {
    pub fn new(kappa: f64, epsilon: f64, kbar: f64, modulation: Modulation) -> Result<Self> {
        let p = Params {
            kappa,
            epsilon,
            kbar,
            modulation,
            spont: SpontaneousSettings::OFF,
        };
        p.validate()?;
        Ok(p)
    }

    /// κ = 1.2, ε = 0.2, k̄ = 0.25 with cosine modulation.
    pub fn standard() -> Self {
        Params {
            kappa: 1.2,
            epsilon: 0.2,
            kbar: 0.25,
            modulation: Modulation::Cos,
            spont: SpontaneousSettings::OFF,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::invalid("kappa", format!("{} is not > 0", self.kappa)));
        }
        if !(0.0..0.5).contains(&self.epsilon) {
            return Err(Error::invalid(
                "epsilon",
                format!("{} is not in [0, 0.5)", self.epsilon),
            ));
        }
        if !(self.kbar > 0.0) || !self.kbar.is_finite() {
            return Err(Error::invalid("kbar", format!("{} is not > 0", self.kbar)));
        }
        self.spont.validate()
    }

    /// ε as seen by the dynamics (zero for [`Modulation::Unmodulated`]).
    pub fn effective_epsilon(&self) -> f64 {
        match self.modulation {
            Modulation::Unmodulated => 0.0,
            _ => self.epsilon,
        }
    }

    /// Instantaneous well depth `κ(1 − 2ε m(t))`.
    #[inline]
    pub fn amplitude(&self, t: f64) -> f64 {
        self.kappa * (1.0 - 2.0 * self.effective_epsilon() * self.modulation.shape(t))
    }

    pub fn snapshot_phase(&self) -> f64 {
        self.modulation.snapshot_phase()
    }

    pub fn with_kbar(mut self, kbar: f64) -> Self {
        self.kbar = kbar;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_modulation(mut self, modulation: Modulation) -> Self {
        self.modulation = modulation;
        self
    }

    pub fn with_spont(mut self, spont: SpontaneousSettings) -> Self {
        self.spont = spont;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(Params::new(0.0, 0.2, 0.25, Modulation::Cos).is_err());
        assert!(Params::new(1.2, 0.5, 0.25, Modulation::Cos).is_err());
        assert!(Params::new(1.2, -0.1, 0.25, Modulation::Cos).is_err());
        assert!(Params::new(1.2, 0.2, 0.0, Modulation::Cos).is_err());
        assert!(Params::new(1.2, 0.2, 0.25, Modulation::Sin).is_ok());
    }

    #[test]
    fn unmodulated_ignores_epsilon() {
        let p = Params::standard().with_modulation(Modulation::Unmodulated);
        assert_eq!(p.amplitude(0.0), 1.2);
        assert_eq!(p.amplitude(1.3), 1.2);
        let c = Params::standard();
        assert!((c.amplitude(0.0) - 1.2 * 0.6).abs() < 1e-15);
    }

    #[test]
    fn spont_off_iff_zero_rate() {
        assert!(SpontaneousSettings::new(0.0, RecoilModel::Off, false).is_ok());
        assert!(SpontaneousSettings::new(1.0, RecoilModel::Off, false).is_err());
        assert!(SpontaneousSettings::new(0.0, RecoilModel::Dipole, false).is_err());
        assert!(SpontaneousSettings::new(-1.0, RecoilModel::Dipole, false).is_err());
    }

    #[test]
    fn snapshot_phases() {
        assert_eq!(Modulation::Cos.snapshot_phase(), 0.0);
        assert_eq!(Modulation::Sin.snapshot_phase(), PI / 2.0);
    }
}
