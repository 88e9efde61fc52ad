//! Classical dynamics: symplectic flow, stroboscopic maps, portraits, period-one
//! fixed points and noisy ensembles.

mod ensemble;
mod fixed;
mod integrate;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::params::Params;

pub use ensemble::{
    evolve_classical_ensemble, ClassicalEnsemble, EnsembleOptions, EnsembleSnapshots,
};
pub(crate) use ensemble::evolve_ensemble_by;
pub use fixed::{
    find_fixed_point, find_period1_fixed_point, find_period1_fixed_point_with, monodromy, FixedPoint, NewtonOptions,
};
pub use integrate::{
    flow, integrate_trajectory, poincare_portrait, poincare_portrait_by, portrait_seed_lattice, stroboscopic_map,
    stroboscopic_map_with, tangent_map, ForceField, Integrator, PortraitOrbit, Scheme,
};

pub const PERIOD: f64 = 2.0 * PI;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { q: 0.0, p: 0.0 };

    pub fn new(q: f64, p: f64) -> Self {
        PhasePoint { q, p }
    }

    pub fn is_finite(&self) -> bool {
        self.q.is_finite() && self.p.is_finite()
    }

    /// Same point with `q` folded into `[−period/2, period/2)`.
    pub fn folded(self, period: f64) -> Self {
        let h = 0.5 * period;
        PhasePoint {
            q: (self.q + h).rem_euclid(period) - h,
            p: self.p,
        }
    }

    pub fn reflected(self) -> Self {
        PhasePoint {
            q: -self.q,
            p: -self.p,
        }
    }
}

/// Potential `V = −A(t) cos q` and force `F = −A(t) sin q` of the original
/// model.
#[inline]
pub fn potential_and_force(q: f64, t: f64, params: &Params) -> (f64, f64) {
    let a = params.amplitude(t);
    let (s, c) = q.sin_cos();
    (-a * c, -a * s)
}

/// `p²/2 − κ cos q`; conserved when the drive is off.
pub fn pendulum_energy(x: PhasePoint, kappa: f64) -> f64 {
    0.5 * x.p * x.p - kappa * x.q.cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Modulation;

    #[test]
    fn force_values() {
        let p = Params::standard();
        assert_eq!(potential_and_force(0.0, 1.7, &p).1, 0.0);
        let (_, f) = potential_and_force(PI / 2.0, 0.0, &p);
        assert!((f + 0.72).abs() < 1e-15);
        let (_, fm) = potential_and_force(-PI / 2.0, 0.0, &p);
        assert_eq!(fm, -f);
        let s = p.with_modulation(Modulation::Sin);
        assert!((potential_and_force(PI / 2.0, PI / 2.0, &s).1 + 0.72).abs() < 1e-15);
    }
}
