//! Quantum corrections to the classical flow.
//!
//! For a Gaussian Wigner function the exact quantum force term of a cosine
//! potential divided by `∂W/∂p` is the classical force times
//! `exp(−k̄/(4ξ))·sinh(x)/x` with `x = (p − ⟨p⟩)/ξ`. Classical Liouville
//! dynamics in the potential rescaled by that factor then moves a packet like
//! the quantum evolution does. This module provides the factor, the resulting
//! effective dynamics, the self-consistent modified resonance, and the Wigner
//! right-hand sides used to check the construction.

mod dynamics;
mod ensemble;
mod rhs;

use serde::{Deserialize, Serialize};

use crate::classical::potential_and_force;
use crate::error::{Error, Result};
use crate::params::Params;

pub use dynamics::{
    effective_portrait, find_modified_resonance, find_modified_resonance_with,
    modified_stroboscopic_map, EffectiveDynamics, MeanMomentum, ModifiedResonance,
    ReferenceOrbit, ResonanceOptions,
};
pub use ensemble::{classify_particles, evolve_modified_ensemble, ResonanceRegion};
pub use rhs::{
    classical_liouville_rhs, moyal_series_rhs, moyal_shift_rhs, streaming_term, ShiftMode,
    WignerGridState,
};

/// Packet parameters entering the effective potential.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveContext {
    pub p_mean: f64,
    pub xi: f64,
    pub kbar: f64,
}

impl EffectiveContext {
    pub fn new(p_mean: f64, xi: f64, kbar: f64) -> Result<Self> {
        let c = EffectiveContext { p_mean, xi, kbar };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.xi > 0.0) || !self.xi.is_finite() {
            return Err(Error::invalid("xi", format!("{} is not > 0", self.xi)));
        }
        if !(self.kbar > 0.0) || !self.kbar.is_finite() {
            return Err(Error::invalid("kbar", format!("{} is not > 0", self.kbar)));
        }
        if !self.p_mean.is_finite() {
            return Err(Error::invalid("p_mean", "must be finite"));
        }
        Ok(())
    }

    /// `exp(−k̄/(4ξ))`, the factor at the packet centre.
    pub fn compression(&self) -> f64 {
        (-self.kbar / (4.0 * self.xi)).exp()
    }
}

/// `sinh(x)/x`, with the Taylor branch `1 + x²/6 + x⁴/120` for `|x| < 1e−4`.
#[inline]
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    }
}

#[inline]
pub(crate) fn factor_raw(p: f64, p_mean: f64, xi: f64, compression: f64) -> f64 {
    compression * sinhc((p - p_mean) / xi)
}

/// Multiplier turning the original potential into the effective one.
pub fn veff_factor(p: f64, ctx: &EffectiveContext) -> f64 {
    factor_raw(p, ctx.p_mean, ctx.xi, ctx.compression())
}

/// `−∂V_eff/∂q = veff_factor(p)·F(q, t)`.
pub fn effective_force(q: f64, p: f64, t: f64, params: &Params, ctx: &EffectiveContext) -> f64 {
    veff_factor(p, ctx) * potential_and_force(q, t, params).1
}
