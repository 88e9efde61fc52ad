use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EffectiveDynamics;
use crate::classical::{
    evolve_ensemble_by, flow, ClassicalEnsemble, EnsembleOptions, EnsembleSnapshots, ForceField,
    PhasePoint, PERIOD,
};
use crate::error::Result;
use crate::params::Params;

/// Axis-aligned ellipses around island centres at the snapshot phase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceRegion {
    pub centres: Vec<PhasePoint>,
    pub semi_q: f64,
    pub semi_p: f64,
}

impl ResonanceRegion {
    pub const DEFAULT_SEMI_AXES: (f64, f64) = (1.0, 0.35);

    pub fn new(centres: Vec<PhasePoint>) -> Self {
        ResonanceRegion {
            centres,
            semi_q: Self::DEFAULT_SEMI_AXES.0,
            semi_p: Self::DEFAULT_SEMI_AXES.1,
        }
    }

    pub fn empty() -> Self {
        Self::new(Vec::new())
    }

    /// Index of the first ellipse containing `x` (with `q` taken modulo 2π).
    pub fn locate(&self, x: PhasePoint) -> Option<usize> {
        self.centres.iter().position(|c| {
            let dq = crate::grid::wrap_angle(x.q - c.q) / self.semi_q;
            let dp = (x.p - c.p) / self.semi_p;
            dq * dq + dp * dp <= 1.0
        })
    }
}

/// Assign each particle of `ens`, given at `t0`, to a region index by
/// carrying it with the original flow to the next snapshot phase.
pub fn classify_particles(
    ens: &ClassicalEnsemble,
    t0: f64,
    params: &Params,
    region: &ResonanceRegion,
    opts: &EnsembleOptions,
) -> Vec<Option<usize>> {
    if region.centres.is_empty() || params.effective_epsilon() == 0.0 {
        return vec![None; ens.len()];
    }
    let phase = params.snapshot_phase();
    let t_snap = phase + ((t0 - phase) / PERIOD).ceil() * PERIOD;
    ens.points()
        .par_iter()
        .map(|&x| {
            flow(params, x, t0, t_snap, opts.integrator)
                .ok()
                .and_then(|y| region.locate(y))
        })
        .collect()
}

enum Field<'a> {
    Original(&'a Params),
    Effective(&'a EffectiveDynamics),
}

impl ForceField for Field<'_> {
    #[inline]
    fn kick(&self, q: f64, p: f64, t: f64, tau: f64) -> f64 {
        match self {
            Field::Original(f) => f.kick(q, p, t, tau),
            Field::Effective(f) => f.kick(q, p, t, tau),
        }
    }
}

/// Particles inside `region` follow the effective dynamics of the matching
/// entry of `dynamics`; all others follow the original flow.
pub fn evolve_modified_ensemble(
    ens: &ClassicalEnsemble,
    t0: f64,
    times: &[f64],
    params: &Params,
    region: &ResonanceRegion,
    dynamics: &[EffectiveDynamics],
    opts: &EnsembleOptions,
) -> Result<(EnsembleSnapshots, Vec<Option<usize>>)> {
    if region.centres.len() != dynamics.len() {
        return Err(crate::error::Error::invalid(
            "dynamics",
            "one effective dynamics per resonance centre required",
        ));
    }
    let class = classify_particles(ens, t0, params, region, opts);
    let fields: Vec<Field> = std::iter::once(Field::Original(params))
        .chain(dynamics.iter().map(Field::Effective))
        .collect();
    let snaps = evolve_ensemble_by(ens, t0, times, params, opts, |i| {
        &fields[class[i].map_or(0, |c| c + 1)]
    })?;
    Ok((snaps, class))
}
