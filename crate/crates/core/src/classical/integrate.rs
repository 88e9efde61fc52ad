use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{potential_and_force, PhasePoint, PERIOD};
use crate::error::{Error, Result};
use crate::params::Params;

/// A momentum kick law. The drift is always `q̇ = p`.
pub trait ForceField: Sync {
    /// Solve `ṗ = F(q, p, t)` over a duration `tau` with `q` and `t` frozen.
    fn kick(&self, q: f64, p: f64, t: f64, tau: f64) -> f64;
}

impl ForceField for Params {
    #[inline]
    fn kick(&self, q: f64, p: f64, t: f64, tau: f64) -> f64 {
        p + tau * potential_and_force(q, t, self).1
    }
}

impl<F: ForceField + ?Sized> ForceField for &F {
    #[inline]
    fn kick(&self, q: f64, p: f64, t: f64, tau: f64) -> f64 {
        (**self).kick(q, p, t, tau)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Kick-drift-kick, second order.
    Leapfrog,
    /// Fourth-order triple-jump composition of the kick-drift-kick step.
    Yoshida4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Integrator {
    pub scheme: Scheme,
    /// Steps per drive period.
    pub substeps: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            scheme: Scheme::Yoshida4,
            substeps: 2048,
        }
    }
}

impl Integrator {
    pub fn new(scheme: Scheme, substeps: usize) -> Result<Self> {
        let i = Integrator { scheme, substeps };
        i.validate()?;
        Ok(i)
    }

    pub fn leapfrog(substeps: usize) -> Result<Self> {
        Self::new(Scheme::Leapfrog, substeps)
    }

    pub fn validate(&self) -> Result<()> {
        if self.substeps < 16 {
            return Err(Error::invalid(
                "substeps",
                format!("{} is below the minimum of 16 per period", self.substeps),
            ));
        }
        Ok(())
    }
}

const Y_W1: f64 = 1.351_207_191_959_657_8;
const Y_W0: f64 = -1.702_414_383_919_315_5;

#[inline]
fn kdk<F: ForceField + ?Sized>(field: &F, x: &mut PhasePoint, t: f64, h: f64) {
    x.p = field.kick(x.q, x.p, t + 0.25 * h, 0.5 * h);
    x.q += h * x.p;
    x.p = field.kick(x.q, x.p, t + 0.75 * h, 0.5 * h);
}

#[inline]
fn step<F: ForceField + ?Sized>(field: &F, scheme: Scheme, x: &mut PhasePoint, t: f64, h: f64) {
    match scheme {
        Scheme::Leapfrog => kdk(field, x, t, h),
        Scheme::Yoshida4 => {
            let (a, b) = (Y_W1 * h, Y_W0 * h);
            kdk(field, x, t, a);
            kdk(field, x, t + a, b);
            kdk(field, x, t + a + b, a);
        }
    }
}

/// `x` with its Jacobian `j` (rows `q`, `p`) under the original force.
struct Tangent<'a> {
    params: &'a Params,
    x: PhasePoint,
    j: [[f64; 2]; 2],
}

impl Tangent<'_> {
    fn kick(&mut self, t: f64, tau: f64) {
        let k = -tau * self.params.amplitude(t) * self.x.q.cos();
        self.x.p = self.params.kick(self.x.q, self.x.p, t, tau);
        for col in 0..2 {
            self.j[1][col] += k * self.j[0][col];
        }
    }

    fn drift(&mut self, h: f64) {
        self.x.q += h * self.x.p;
        for col in 0..2 {
            self.j[0][col] += h * self.j[1][col];
        }
    }

    fn kdk(&mut self, t: f64, h: f64) {
        self.kick(t + 0.25 * h, 0.5 * h);
        self.drift(h);
        self.kick(t + 0.75 * h, 0.5 * h);
    }
}

/// One drive period of the original dynamics from `t0` together with the
/// exact Jacobian of the discrete map, propagated through every substep.
pub fn tangent_map(params: &Params, x0: PhasePoint, t0: f64, integ: Integrator) -> Result<(PhasePoint, [[f64; 2]; 2])> {
    integ.validate()?;
    let h = ((t0 + PERIOD) - t0) / integ.substeps as f64;
    let mut s = Tangent {
        params,
        x: x0,
        j: [[1.0, 0.0], [0.0, 1.0]],
    };
    for i in 0..integ.substeps {
        let t = t0 + i as f64 * h;
        match integ.scheme {
            Scheme::Leapfrog => s.kdk(t, h),
            Scheme::Yoshida4 => {
                let (a, b) = (Y_W1 * h, Y_W0 * h);
                s.kdk(t, a);
                s.kdk(t + a, b);
                s.kdk(t + a + b, a);
            }
        }
        if !s.x.is_finite() {
            return Err(Error::Overflow { t: t + h });
        }
    }
    Ok((s.x, s.j))
}

/// Integrate from `t0` to `t1` with equal steps no longer than
/// `2π / substeps`.
pub fn flow<F: ForceField + ?Sized>(
    field: &F,
    x0: PhasePoint,
    t0: f64,
    t1: f64,
    integ: Integrator,
) -> Result<PhasePoint> {
    integ.validate()?;
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(x0);
    }
    let steps = ((span.abs() / PERIOD) * integ.substeps as f64 - 1e-9).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let mut x = x0;
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        step(field, integ.scheme, &mut x, t, h);
        if !x.is_finite() {
            return Err(Error::Overflow { t: t + h });
        }
    }
    Ok(x)
}

pub fn integrate_trajectory(
    x0: PhasePoint,
    t0: f64,
    t1: f64,
    integ: Integrator,
    params: &Params,
) -> Result<PhasePoint> {
    flow(params, x0, t0, t1, integ)
}

/// One drive period of the original dynamics, starting at the snapshot phase
/// of cycle `cycle`.
pub fn stroboscopic_map(x0: PhasePoint, cycle: usize, params: &Params) -> Result<PhasePoint> {
    let t0 = params.snapshot_phase() + cycle as f64 * PERIOD;
    flow(params, x0, t0, t0 + PERIOD, Integrator::default())
}

pub fn stroboscopic_map_with<F: ForceField + ?Sized>(
    field: &F,
    x0: PhasePoint,
    t0: f64,
    integ: Integrator,
) -> Result<PhasePoint> {
    flow(field, x0, t0, t0 + PERIOD, integ)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PortraitOrbit {
    pub seed_id: usize,
    pub seed: PhasePoint,
    /// Stroboscopic iterates with `q` folded into `[−π, π)`, starting with the
    /// seed itself.
    pub points: Vec<PhasePoint>,
    /// Set when the orbit overflowed; `points` holds the iterates before it.
    pub error: Option<String>,
}

/// `side × side` seeds on `q ∈ [−π, π)`, `p ∈ [−p_range, p_range]`.
pub fn portrait_seed_lattice(side: usize, p_range: f64) -> Vec<PhasePoint> {
    let mut out = Vec::with_capacity(side * side);
    for i in 0..side {
        let p = if side == 1 {
            0.0
        } else {
            -p_range + 2.0 * p_range * i as f64 / (side - 1) as f64
        };
        for j in 0..side {
            let q = -std::f64::consts::PI + PERIOD * j as f64 / side as f64;
            out.push(PhasePoint::new(q, p));
        }
    }
    out
}

/// Orbits of the stroboscopic map for every seed, computed in parallel.
/// `field_for` chooses the dynamics per seed.
pub fn poincare_portrait_by<'a, S, F>(
    seeds: &[PhasePoint],
    n_cycles: usize,
    t0: f64,
    integ: Integrator,
    field_for: S,
) -> Result<Vec<PortraitOrbit>>
where
    S: Fn(&PhasePoint) -> &'a F + Sync,
    F: ForceField + ?Sized + 'a,
{
    if n_cycles == 0 {
        return Err(Error::invalid("n_cycles", "need at least one cycle"));
    }
    integ.validate()?;
    Ok(seeds
        .par_iter()
        .enumerate()
        .map(|(seed_id, &seed)| {
            let field = field_for(&seed);
            let mut points = Vec::with_capacity(n_cycles + 1);
            points.push(seed.folded(PERIOD));
            let mut x = seed;
            let mut error = None;
            for c in 0..n_cycles {
                let t = t0 + c as f64 * PERIOD;
                match flow(field, x, t, t + PERIOD, integ) {
                    Ok(y) => {
                        // keep q bounded so long orbits do not lose precision
                        x = y.folded(PERIOD);
                        points.push(x);
                    }
                    Err(e) => {
                        error = Some(e.to_string());
                        break;
                    }
                }
            }
            PortraitOrbit {
                seed_id,
                seed,
                points,
                error,
            }
        })
        .collect())
}

pub fn poincare_portrait(
    seeds: &[PhasePoint],
    n_cycles: usize,
    params: &Params,
    integ: Integrator,
) -> Result<Vec<PortraitOrbit>> {
    poincare_portrait_by(seeds, n_cycles, params.snapshot_phase(), integ, |_| params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::pendulum_energy;
    use crate::params::Modulation;

    #[test]
    fn equilibrium_is_exact() {
        let p = Params::standard();
        let y = stroboscopic_map(PhasePoint::ORIGIN, 0, &p).unwrap();
        assert_eq!(y, PhasePoint::ORIGIN);
    }

    #[test]
    fn yoshida_conserves_pendulum_energy() {
        let p = Params::standard().with_modulation(Modulation::Unmodulated);
        let x0 = PhasePoint::new(0.5, 0.8);
        let e0 = pendulum_energy(x0, p.kappa);
        let x = integrate_trajectory(x0, 0.0, 10.0 * PERIOD, Integrator::default(), &p).unwrap();
        assert!(((pendulum_energy(x, p.kappa) - e0) / e0).abs() < 1e-10);
    }

    #[test]
    fn rejects_coarse_integrator() {
        assert!(Integrator::new(Scheme::Leapfrog, 8).is_err());
    }

    #[test]
    fn lattice_shape() {
        let s = portrait_seed_lattice(24, 2.0);
        assert_eq!(s.len(), 576);
        assert_eq!(s[0], PhasePoint::new(-std::f64::consts::PI, -2.0));
        assert_eq!(s[575].p, 2.0);
    }
}
