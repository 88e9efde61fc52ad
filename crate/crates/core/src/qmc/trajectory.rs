use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{apply_recoil_in_place, draw_jump_schedule, stream_rng, JumpSchedule, Purpose};
use crate::classical::PERIOD;
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::histogram::{BinAccumulator, HistogramLabel, MomentumHistogram};
use crate::params::Params;
use crate::quantum::SplitOperator;
use crate::series::StroboscopicSeries;
use crate::wave::{init_packet, GaussianPacket, WaveFunction};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub t0: f64,
    pub t1: f64,
}

impl TimeWindow {
    /// `n_cycles` whole periods starting at the snapshot phase of `params`.
    pub fn cycles(params: &Params, n_cycles: usize) -> Self {
        let t0 = params.snapshot_phase();
        TimeWindow {
            t0,
            t1: t0 + n_cycles as f64 * PERIOD,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t1 > self.t0) || !self.t0.is_finite() || !self.t1.is_finite() {
            return Err(Error::invalid("window", "need finite t0 < t1"));
        }
        Ok(())
    }

    /// Snapshot times `phase + 2πs` inside `[t0, t1]` with their cycle
    /// index `s`.
    pub fn snapshots(&self, phase: f64) -> Vec<(usize, f64)> {
        let tol = 1e-12 * self.t1.abs().max(1.0);
        let first = ((self.t0 - phase - tol) / PERIOD).ceil().max(0.0) as usize;
        let mut out = Vec::new();
        let mut s = first;
        loop {
            let t = phase + s as f64 * PERIOD;
            if t > self.t1 + tol {
                break;
            }
            out.push((s, t));
            s += 1;
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct TrajectoryResult {
    pub final_state: WaveFunction,
    pub series: StroboscopicSeries,
    pub jumps: JumpSchedule,
    pub master_seed: u64,
    pub stream: u64,
}

/// Unitary evolution over `window` interrupted by recoils drawn from stream
/// `stream` of `master_seed`. Propagation is split exactly at jump times.
pub fn run_quantum_trajectory(
    psi0: &WaveFunction,
    window: TimeWindow,
    params: &Params,
    steps_per_cycle: usize,
    master_seed: u64,
    stream: u64,
) -> Result<TrajectoryResult> {
    window.validate()?;
    let params = params.with_kbar(psi0.kbar());
    params.validate()?;
    let jumps = if params.spont.is_off() {
        JumpSchedule::default()
    } else {
        let mut rng = stream_rng(master_seed, Purpose::QuantumJumps, stream);
        draw_jump_schedule(window.t0, window.t1, &params.spont, params.kbar, &mut rng)?
    };

    enum Stop {
        Snapshot(usize),
        Jump(f64),
        End,
    }
    let mut stops: Vec<(f64, Stop)> = window
        .snapshots(params.snapshot_phase())
        .into_iter()
        .map(|(s, t)| (t, Stop::Snapshot(s)))
        .chain(jumps.times.iter().zip(&jumps.kicks).map(|(&t, &k)| (t, Stop::Jump(k))))
        .collect();
    stops.push((window.t1, Stop::End));
    // Stable sort keeps snapshots ahead of a coincident jump.
    stops.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut op = SplitOperator::new(*psi0.grid(), &params)?;
    let mut psi = psi0.clone();
    let mut series = StroboscopicSeries::default();
    let mut t = window.t0;
    for (ts, stop) in stops {
        let ts = ts.max(t);
        op.advance(&mut psi, t, ts, steps_per_cycle)?;
        t = ts;
        match stop {
            Stop::Snapshot(s) => {
                let m = psi.moments();
                series.push(s, t, m.mean_p, m.var_p);
            }
            Stop::Jump(dp) => apply_recoil_in_place(&mut psi, dp)?,
            Stop::End => {}
        }
    }
    Ok(TrajectoryResult {
        final_state: psi,
        series,
        jumps,
        master_seed,
        stream,
    })
}

#[derive(Clone, Debug)]
pub struct EnsembleDistribution {
    pub histogram: MomentumHistogram,
    /// Mixture mean and variance of `p` at each snapshot.
    pub series: StroboscopicSeries,
    pub failures: Vec<(usize, String)>,
    pub total_jumps: usize,
}

/// Average momentum distribution at `window.t1` over one trajectory per
/// packet. Trajectory `i` uses stream `i`. Probability beyond the edges is
/// left out and reported by the histogram's outside fraction.
pub fn ensemble_distribution(
    initials: &[GaussianPacket],
    grid: SpatialGrid,
    window: TimeWindow,
    params: &Params,
    steps_per_cycle: usize,
    master_seed: u64,
    edges: Vec<f64>,
) -> Result<EnsembleDistribution> {
    if initials.is_empty() {
        return Err(Error::invalid("initials", "need at least one packet"));
    }
    let empty = BinAccumulator::new(edges)?;
    let runs: Vec<Result<(BinAccumulator, TrajectoryResult)>> = initials
        .par_iter()
        .enumerate()
        .map(|(i, &packet)| {
            let psi = init_packet(packet, grid, params.kbar)?;
            let r = run_quantum_trajectory(&psi, window, params, steps_per_cycle, master_seed, i as u64)?;
            let mut acc = empty.clone();
            acc.add_momentum_density(&r.final_state.momentum_representation(), 1.0);
            Ok((acc, r))
        })
        .collect();

    let mut acc = empty;
    let mut failures = Vec::new();
    let mut sums: Vec<(usize, f64, f64, f64)> = Vec::new();
    let mut ok = 0usize;
    let mut total_jumps = 0;
    for (i, run) in runs.into_iter().enumerate() {
        match run {
            Ok((a, r)) => {
                acc.merge(&a)?;
                total_jumps += r.jumps.len();
                if sums.is_empty() {
                    sums = r.series.cycles.iter().zip(&r.series.times).map(|(&c, &t)| (c, t, 0.0, 0.0)).collect();
                }
                for (s, (m, v)) in sums.iter_mut().zip(r.series.mean_p.iter().zip(&r.series.var_p)) {
                    s.2 += m;
                    s.3 += v + m * m;
                }
                ok += 1;
            }
            Err(e) => failures.push((i, e.to_string())),
        }
    }
    let total = initials.len();
    if failures.len() * 100 >= total && !failures.is_empty() {
        return Err(Error::TooManyFailures {
            failed: failures.len(),
            total,
            first: failures[0].1.clone(),
        });
    }
    let mut series = StroboscopicSeries::with_capacity(sums.len());
    for (c, t, m, m2) in sums {
        let mean = m / ok as f64;
        series.push(c, t, mean, m2 / ok as f64 - mean * mean);
    }
    Ok(EnsembleDistribution {
        histogram: acc.finish_clipped(HistogramLabel::Quantum)?,
        series,
        failures,
        total_jumps,
    })
}
