use rand_distr::{Distribution, Normal, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{flow, ForceField, Integrator, PhasePoint};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::qmc::{draw_jump_schedule, stream_rng, Purpose};
use crate::wave::GaussianPacket;

/// Independent particles, each with its own random-stream index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalEnsemble {
    points: Vec<PhasePoint>,
    seeds: Vec<u64>,
}

impl ClassicalEnsemble {
    /// Stream indices are the particle indices.
    pub fn new(points: Vec<PhasePoint>) -> Result<Self> {
        let seeds = (0..points.len() as u64).collect();
        Self::with_seeds(points, seeds)
    }

    pub fn with_seeds(points: Vec<PhasePoint>, seeds: Vec<u64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("ensemble", "needs at least one particle"));
        }
        if seeds.len() != points.len() {
            return Err(Error::invalid("seeds", "one seed per particle required"));
        }
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("seeds", "seeds must be distinct"));
        }
        Ok(ClassicalEnsemble { points, seeds })
    }

    /// `count` particles uniform in `q ∈ [q_lo, q_hi)` and normal in `p`.
    pub fn cloud(
        count: usize,
        q_range: (f64, f64),
        p_mean: f64,
        sigma_p: f64,
        master_seed: u64,
    ) -> Result<Self> {
        if !(q_range.1 > q_range.0) {
            return Err(Error::invalid("q_range", "empty interval"));
        }
        let normal = Normal::new(p_mean, sigma_p)
            .map_err(|e| Error::invalid("sigma_p", e.to_string()))?;
        let uniform = Uniform::new(q_range.0, q_range.1)
            .map_err(|e| Error::invalid("q_range", e.to_string()))?;
        let points = (0..count as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(master_seed, Purpose::ClassicalCloud, i);
                PhasePoint::new(uniform.sample(&mut rng), normal.sample(&mut rng))
            })
            .collect();
        Self::new(points)
    }

    /// `count` particles drawn from the Wigner functions of `packets`,
    /// particle `i` from packet `i mod packets.len()`.
    pub fn from_packets(count: usize, packets: &[GaussianPacket], kbar: f64, master_seed: u64) -> Result<Self> {
        if packets.is_empty() {
            return Err(Error::invalid("packets", "need at least one packet"));
        }
        let unit = Normal::new(0.0, 1.0).map_err(|e| Error::invalid("normal", e.to_string()))?;
        let points = (0..count as u64)
            .into_par_iter()
            .map(|i| {
                let pk = packets[(i % packets.len() as u64) as usize];
                let mut rng = stream_rng(master_seed, Purpose::ClassicalCloud, i);
                let q = pk.q0 + pk.var_q(kbar).sqrt() * unit.sample(&mut rng);
                let p = pk.p0 + pk.var_p(kbar).sqrt() * unit.sample(&mut rng);
                PhasePoint::new(q, p)
            })
            .collect();
        Self::new(points)
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    pub fn seeds(&self) -> &[u64] {
        &self.seeds
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleOptions {
    pub integrator: Integrator,
    pub master_seed: u64,
    /// Particles with `|p|` above this are frozen and flagged.
    pub freeze_limit: Option<f64>,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        EnsembleOptions {
            integrator: Integrator::default(),
            master_seed: 0,
            freeze_limit: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSnapshots {
    pub times: Vec<f64>,
    /// `states[s][i]`: particle `i` at `times[s]`.
    pub states: Vec<Vec<PhasePoint>>,
    pub flagged: Vec<bool>,
    pub kick_counts: Vec<usize>,
}

impl EnsembleSnapshots {
    pub fn flagged_count(&self) -> usize {
        self.flagged.iter().filter(|&&f| f).count()
    }

    pub fn momenta(&self, snapshot: usize) -> impl Iterator<Item = f64> + '_ {
        self.states[snapshot].iter().map(|x| x.p)
    }
}

struct ParticleRun {
    states: Vec<PhasePoint>,
    flagged: bool,
    kicks: usize,
}

fn check_times(t0: f64, times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::invalid("times", "need at least one snapshot time"));
    }
    if times[0] < t0 || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("times", "snapshot times must increase from t0"));
    }
    Ok(())
}

fn run_particle<F: ForceField + ?Sized>(
    field: &F,
    x0: PhasePoint,
    seed: u64,
    t0: f64,
    times: &[f64],
    params: &Params,
    opts: &EnsembleOptions,
) -> ParticleRun {
    let schedule = if params.spont.is_off() {
        Default::default()
    } else {
        let mut rng = stream_rng(opts.master_seed, Purpose::ClassicalJumps, seed);
        draw_jump_schedule(t0, times[times.len() - 1], &params.spont, params.kbar, &mut rng)
            .unwrap_or_default()
    };
    let mut states = Vec::with_capacity(times.len());
    let mut x = x0;
    let mut t = t0;
    let mut jumps = schedule.times.iter().zip(&schedule.kicks).peekable();
    let mut kicks = 0;
    let frozen = |x: PhasePoint| opts.freeze_limit.is_some_and(|lim| x.p.abs() > lim);
    let mut flagged = frozen(x0);
    for &ts in times {
        while !flagged {
            let (target, kick) = match jumps.peek() {
                Some(&(&tj, &dp)) if tj <= ts => (tj, Some(dp)),
                _ => (ts, None),
            };
            match flow(field, x, t, target, opts.integrator) {
                Ok(y) => {
                    x = y;
                    t = target;
                }
                Err(_) => {
                    flagged = true;
                    break;
                }
            }
            if let Some(dp) = kick {
                x.p += dp;
                kicks += 1;
                jumps.next();
            }
            if frozen(x) {
                flagged = true;
            }
            if kick.is_none() {
                break;
            }
        }
        states.push(x);
    }
    ParticleRun {
        states,
        flagged,
        kicks,
    }
}

/// Evolve every particle from `t0` with its own dynamics (`field_for(i)`),
/// recording the ensemble at each of `times`.
pub(crate) fn evolve_ensemble_by<'a, S, F>(
    ens: &ClassicalEnsemble,
    t0: f64,
    times: &[f64],
    params: &Params,
    opts: &EnsembleOptions,
    field_for: S,
) -> Result<EnsembleSnapshots>
where
    S: Fn(usize) -> &'a F + Sync,
    F: ForceField + ?Sized + 'a,
{
    check_times(t0, times)?;
    params.validate()?;
    opts.integrator.validate()?;
    let runs: Vec<ParticleRun> = ens
        .points
        .par_iter()
        .zip(ens.seeds.par_iter())
        .enumerate()
        .map(|(i, (&x0, &seed))| run_particle(field_for(i), x0, seed, t0, times, params, opts))
        .collect();
    let mut states = vec![Vec::with_capacity(runs.len()); times.len()];
    for r in &runs {
        for (s, x) in r.states.iter().enumerate() {
            states[s].push(*x);
        }
    }
    Ok(EnsembleSnapshots {
        times: times.to_vec(),
        states,
        flagged: runs.iter().map(|r| r.flagged).collect(),
        kick_counts: runs.iter().map(|r| r.kicks).collect(),
    })
}

pub fn evolve_classical_ensemble(
    ens: &ClassicalEnsemble,
    t0: f64,
    times: &[f64],
    params: &Params,
    opts: &EnsembleOptions,
) -> Result<EnsembleSnapshots> {
    evolve_ensemble_by(ens, t0, times, params, opts, |_| params)
}
