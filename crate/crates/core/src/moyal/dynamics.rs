use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{factor_raw, EffectiveContext};
use crate::classical::{
    find_period1_fixed_point_with, flow, poincare_portrait_by, potential_and_force,
    stroboscopic_map_with, FixedPoint, ForceField, Integrator, NewtonOptions, PhasePoint,
    PortraitOrbit, PERIOD,
};
use crate::error::{Error, Result};
use crate::params::Params;

/// Momentum of a reference orbit over one drive period, sampled uniformly and
/// extended periodically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceOrbit {
    t0: f64,
    p: Vec<f64>,
}

impl ReferenceOrbit {
    pub const SAMPLES: usize = 1024;

    pub fn constant(p: f64) -> Self {
        ReferenceOrbit { t0: 0.0, p: vec![p] }
    }

    /// Sample the orbit of `x0` over `[t0, t0 + 2π)` under `field`.
    pub fn sample<F: ForceField + ?Sized>(
        field: &F,
        x0: PhasePoint,
        t0: f64,
        integ: Integrator,
    ) -> Result<Self> {
        let n = Self::SAMPLES;
        let h = PERIOD / n as f64;
        let sub = Integrator {
            substeps: integ.substeps.max(n),
            ..integ
        };
        let mut p = Vec::with_capacity(n);
        let mut x = x0;
        for i in 0..n {
            p.push(x.p);
            let t = t0 + i as f64 * h;
            x = flow(field, x, t, t + h, sub)?;
        }
        Ok(ReferenceOrbit { t0, p })
    }

    /// Linear interpolation in time.
    #[inline]
    pub fn at(&self, t: f64) -> f64 {
        let n = self.p.len();
        if n == 1 {
            return self.p[0];
        }
        let s = ((t - self.t0) / PERIOD).rem_euclid(1.0) * n as f64;
        let i = (s.floor() as usize).min(n - 1);
        let f = s - i as f64;
        self.p[i] * (1.0 - f) + self.p[(i + 1) % n] * f
    }

    pub fn samples(&self) -> &[f64] {
        &self.p
    }

    fn blend(&self, other: &ReferenceOrbit, weight: f64) -> ReferenceOrbit {
        if self.p.len() != other.p.len() {
            return other.clone();
        }
        ReferenceOrbit {
            t0: other.t0,
            p: self
                .p
                .iter()
                .zip(&other.p)
                .map(|(a, b)| (1.0 - weight) * a + weight * b)
                .collect(),
        }
    }
}

/// The `⟨p⟩` entering the effective potential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum MeanMomentum {
    /// Held constant.
    Fixed(f64),
    /// Follows a reference orbit through the drive period.
    Tracking(Arc<ReferenceOrbit>),
}

impl MeanMomentum {
    #[inline]
    pub fn at(&self, t: f64) -> f64 {
        match self {
            MeanMomentum::Fixed(p) => *p,
            MeanMomentum::Tracking(o) => o.at(t),
        }
    }
}

/// Classical flow in the effective potential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveDynamics {
    params: Params,
    xi: f64,
    compression: f64,
    mean: MeanMomentum,
}

impl EffectiveDynamics {
    pub fn new(params: &Params, xi: f64, mean: MeanMomentum) -> Result<Self> {
        params.validate()?;
        let ctx = EffectiveContext::new(mean.at(0.0), xi, params.kbar)?;
        Ok(EffectiveDynamics {
            params: *params,
            xi,
            compression: ctx.compression(),
            mean,
        })
    }

    /// Dynamics with `⟨p⟩` frozen at `ctx.p_mean`.
    pub fn frozen(params: &Params, ctx: &EffectiveContext) -> Result<Self> {
        Self::new(&params.with_kbar(ctx.kbar), ctx.xi, MeanMomentum::Fixed(ctx.p_mean))
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn mean(&self) -> &MeanMomentum {
        &self.mean
    }

    /// Context seen at time `t`.
    pub fn context_at(&self, t: f64) -> EffectiveContext {
        EffectiveContext {
            p_mean: self.mean.at(t),
            xi: self.xi,
            kbar: self.params.kbar,
        }
    }

    #[inline]
    pub fn force(&self, q: f64, p: f64, t: f64) -> f64 {
        let f = potential_and_force(q, t, &self.params).1;
        f * factor_raw(p, self.mean.at(t), self.xi, self.compression)
    }
}

impl ForceField for EffectiveDynamics {
    /// One RK4 step of `ṗ = F(q, t)·factor(p)`.
    #[inline]
    fn kick(&self, q: f64, p: f64, t: f64, tau: f64) -> f64 {
        let f = potential_and_force(q, t, &self.params).1;
        let pm = self.mean.at(t);
        let g = |p: f64| f * factor_raw(p, pm, self.xi, self.compression);
        let k1 = g(p);
        let k2 = g(p + 0.5 * tau * k1);
        let k3 = g(p + 0.5 * tau * k2);
        let k4 = g(p + tau * k3);
        p + tau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    }
}

/// One drive period of the effective dynamics from the snapshot phase of
/// cycle `cycle`.
pub fn modified_stroboscopic_map(
    x0: PhasePoint,
    cycle: usize,
    dynamics: &EffectiveDynamics,
) -> Result<PhasePoint> {
    let t0 = dynamics.params.snapshot_phase() + cycle as f64 * PERIOD;
    stroboscopic_map_with(dynamics, x0, t0, Integrator::default())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceOptions {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub integrator: Integrator,
    pub newton: NewtonOptions,
}

impl Default for ResonanceOptions {
    fn default() -> Self {
        ResonanceOptions {
            damping: 0.5,
            tolerance: 1e-8,
            max_iterations: 100,
            integrator: Integrator::default(),
            newton: NewtonOptions::default(),
        }
    }
}

/// Self-consistent period-one resonance of the effective dynamics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModifiedResonance {
    pub fixed: FixedPoint,
    /// Classical resonance the iteration started from.
    pub classical: FixedPoint,
    pub dynamics: EffectiveDynamics,
    /// Context at the snapshot phase, `p_mean = p*`.
    pub context: EffectiveContext,
    pub outer_iterations: usize,
}

pub fn find_modified_resonance(
    guess: PhasePoint,
    params: &Params,
    kbar: f64,
    xi: f64,
) -> Result<ModifiedResonance> {
    find_modified_resonance_with(guess, params, kbar, xi, ResonanceOptions::default())
}

/// Iterate: solve the fixed point for the current reference orbit, sample the
/// orbit through it, blend it into the reference with weight `damping`, until
/// `p*` moves by less than `tolerance`.
pub fn find_modified_resonance_with(
    guess: PhasePoint,
    params: &Params,
    kbar: f64,
    xi: f64,
    opts: ResonanceOptions,
) -> Result<ModifiedResonance> {
    let params = params.with_kbar(kbar);
    params.validate()?;
    EffectiveContext::new(guess.p, xi, kbar)?;
    let t0 = params.snapshot_phase();
    let integ = opts.integrator;
    let classical = find_period1_fixed_point_with(&params, guess, t0, integ, opts.newton)?;
    let mut reference = ReferenceOrbit::sample(&params, classical.point, t0, integ)?;
    let mut x = classical.point;
    let mut last_p = f64::NAN;
    let mut last_change = f64::INFINITY;
    for it in 1..=opts.max_iterations {
        let dynamics = EffectiveDynamics::new(&params, xi, MeanMomentum::Tracking(Arc::new(reference.clone())))?;
        let fixed = find_period1_fixed_point_with(&dynamics, x, t0, integ, opts.newton)?;
        x = fixed.point;
        last_change = (x.p - last_p).abs();
        if last_change < opts.tolerance {
            let context = dynamics.context_at(t0);
            return Ok(ModifiedResonance {
                fixed,
                classical,
                dynamics,
                context: EffectiveContext { p_mean: x.p, ..context },
                outer_iterations: it,
            });
        }
        last_p = x.p;
        let orbit = ReferenceOrbit::sample(&dynamics, x, t0, integ)?;
        reference = reference.blend(&orbit, opts.damping);
    }
    Err(Error::ResonanceNotConverged {
        iterations: opts.max_iterations,
        last_change,
    })
}

/// Portrait of the effective dynamics. Each seed uses the context of the
/// nearest of the supplied reference dynamics, compared by `⟨p⟩` at the
/// snapshot phase.
pub fn effective_portrait(
    seeds: &[PhasePoint],
    n_cycles: usize,
    contexts: &[EffectiveDynamics],
    integ: Integrator,
) -> Result<Vec<PortraitOrbit>> {
    let first = contexts
        .first()
        .ok_or_else(|| Error::invalid("contexts", "need at least one context"))?;
    let t0 = first.params.snapshot_phase();
    let centres: Vec<f64> = contexts.iter().map(|d| d.mean.at(t0)).collect();
    poincare_portrait_by(seeds, n_cycles, t0, integ, |x| {
        let i = centres
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - x.p).abs().total_cmp(&(b.1 - x.p).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        &contexts[i]
    })
}
