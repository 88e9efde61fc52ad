use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::config::{CloudShape, ExperimentConfig};
use super::peaks::{find_peaks, PeakSet};
use crate::classical::{
    evolve_classical_ensemble, find_period1_fixed_point, find_period1_fixed_point_with,
    poincare_portrait, portrait_seed_lattice, ClassicalEnsemble, EnsembleOptions, FixedPoint,
    Integrator, NewtonOptions, PhasePoint, PortraitOrbit, Scheme, PERIOD,
};
use crate::error::Result;
use crate::histogram::{uniform_edges, HistogramLabel, MomentumHistogram};
use crate::moyal::{
    effective_portrait, evolve_modified_ensemble, find_modified_resonance_with, EffectiveDynamics,
    MeanMomentum, ModifiedResonance, ResonanceOptions, ResonanceRegion,
};
use crate::params::Params;
use crate::qmc::{ensemble_distribution, TimeWindow};
use crate::quantum::{tunneling_series, StartRule, TunnelingRun, XiChoice};
use crate::wave::GaussianPacket;

fn guess_upper(config: &ExperimentConfig) -> PhasePoint {
    PhasePoint::new(0.0, config.packet.guess_p)
}

/// ξ used for effective dynamics outside the quantum runs.
fn context_xi(config: &ExperimentConfig) -> Result<f64> {
    match config.packet.xi {
        XiChoice::Fixed(x) => Ok(x),
        XiChoice::Auto => find_period1_fixed_point(guess_upper(config), &config.params)?
            .matched_xi()
            .ok_or_else(|| crate::error::Error::invalid("xi", "resonance is not elliptic")),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EffectivePortrait {
    pub kbar: f64,
    pub xi: f64,
    pub resonances: Vec<FixedPoint>,
    pub orbits: Vec<PortraitOrbit>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PortraitResults {
    pub original: Vec<PortraitOrbit>,
    pub original_resonances: Vec<FixedPoint>,
    pub effective: Vec<EffectivePortrait>,
}

/// Upper and lower modified resonances plus a centre context frozen at
/// `⟨p⟩ = 0`.
fn island_contexts(
    params: &Params,
    guess: PhasePoint,
    kbar: f64,
    xi: f64,
    integ: Integrator,
) -> Result<(Vec<ModifiedResonance>, EffectiveDynamics)> {
    let opts = ResonanceOptions {
        integrator: integ,
        ..Default::default()
    };
    let upper = find_modified_resonance_with(guess, params, kbar, xi, opts)?;
    let lower = find_modified_resonance_with(guess.reflected(), params, kbar, xi, opts)?;
    let centre = EffectiveDynamics::new(&params.with_kbar(kbar), xi, MeanMomentum::Fixed(0.0))?;
    Ok((vec![lower, upper], centre))
}

pub fn run_portraits(config: &ExperimentConfig) -> Result<PortraitResults> {
    let pc = &config.portrait;
    let params = &config.params;
    let integ = Integrator::new(Scheme::Yoshida4, pc.substeps)?;
    let seeds = portrait_seed_lattice(pc.side, pc.p_range);
    let original = poincare_portrait(&seeds, pc.cycles, params, integ)?;
    let t0 = params.snapshot_phase();
    let mut original_resonances = Vec::new();
    if params.effective_epsilon() > 0.0 {
        for g in [guess_upper(config).reflected(), PhasePoint::ORIGIN, guess_upper(config)] {
            original_resonances.push(find_period1_fixed_point_with(params, g, t0, integ, NewtonOptions::default())?);
        }
    }
    let xi = context_xi(config)?;
    let mut effective = Vec::new();
    for &kbar in &pc.kbars {
        if params.effective_epsilon() == 0.0 {
            let centre = EffectiveDynamics::new(&params.with_kbar(kbar), xi, MeanMomentum::Fixed(0.0))?;
            effective.push(EffectivePortrait {
                kbar,
                xi,
                resonances: Vec::new(),
                orbits: effective_portrait(&seeds, pc.cycles, &[centre], integ)?,
            });
            continue;
        }
        let (side, centre) = island_contexts(params, guess_upper(config), kbar, xi, integ)?;
        let contexts = vec![side[0].dynamics.clone(), centre, side[1].dynamics.clone()];
        effective.push(EffectivePortrait {
            kbar,
            xi,
            resonances: side.iter().map(|r| r.fixed).collect(),
            orbits: effective_portrait(&seeds, pc.cycles, &contexts, integ)?,
        });
    }
    Ok(PortraitResults {
        original,
        original_resonances,
        effective,
    })
}

pub fn run_tunneling(config: &ExperimentConfig, start: StartRule) -> Result<TunnelingRun> {
    tunneling_series(
        start,
        guess_upper(config),
        config.tunneling.cycles,
        &config.params,
        config.packet.xi,
        config.grid.build()?,
        config.tunneling.options(),
    )
}

/// One modified-start series per entry of `config.kscan.kbars`.
pub fn run_kbar_scan(config: &ExperimentConfig) -> Result<Vec<TunnelingRun>> {
    use rayon::prelude::*;
    let grid = config.grid.build()?;
    config
        .kscan
        .kbars
        .par_iter()
        .map(|&kbar| {
            tunneling_series(
                StartRule::Modified,
                guess_upper(config),
                config.kscan.cycles,
                &config.params.with_kbar(kbar),
                config.packet.xi,
                grid,
                config.tunneling.options(),
            )
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonCase {
    pub epsilon: f64,
    pub snapshot_time: f64,
    /// Squeeze of the quantum packets.
    pub xi: f64,
    pub quantum: MomentumHistogram,
    pub modified: MomentumHistogram,
    pub classical: MomentumHistogram,
    /// Peaks per histogram, or the error that prevented finding them.
    pub peaks: [std::result::Result<PeakSet, String>; 3],
    pub side_peaks: [Option<f64>; 3],
    pub resonance_centres: Vec<PhasePoint>,
    pub modified_resonances: Vec<FixedPoint>,
    pub particles_on_resonance: usize,
    pub flagged_classical: usize,
    pub flagged_modified: usize,
    pub quantum_failures: usize,
}

impl ComparisonCase {
    pub fn bin_width(&self) -> f64 {
        self.classical.bin_width()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonResults {
    pub main: ComparisonCase,
    pub control: ComparisonCase,
}

pub fn run_comparison_case(config: &ExperimentConfig, epsilon: f64) -> Result<ComparisonCase> {
    let c = &config.comparison;
    let params = Params {
        epsilon,
        kbar: c.kbar,
        modulation: c.modulation,
        ..config.params
    };
    params.validate()?;
    let t1 = c.cycles * PERIOD;
    let edges = uniform_edges(-c.p_max, c.p_max, c.bins)?;
    let xi = c.packet_xi();
    let integ = Integrator::new(Scheme::Yoshida4, c.substeps)?;

    // quantum: packets evenly spaced over the domain, centred at p = 0
    let grid = c.grid.build()?;
    let l = grid.length();
    let packets: Vec<GaussianPacket> = (0..c.quantum_packets)
        .map(|i| {
            let q = -0.5 * l + (i as f64 + 0.5) * l / c.quantum_packets as f64;
            GaussianPacket::new(q, 0.0, xi)
        })
        .collect();
    let q = ensemble_distribution(
        &packets,
        grid,
        TimeWindow { t0: 0.0, t1 },
        &params,
        c.steps_per_cycle,
        config.master_seed,
        edges.clone(),
    )?;

    // classical clouds share their initial points
    let cloud = match c.cloud {
        CloudShape::PacketMixture => {
            ClassicalEnsemble::from_packets(c.classical_particles, &packets, c.kbar, config.master_seed)?
        }
        CloudShape::Uniform => {
            ClassicalEnsemble::cloud(c.classical_particles, (-PI, PI), 0.0, c.sigma_p, config.master_seed)?
        }
    };
    let opts = EnsembleOptions {
        integrator: integ,
        master_seed: config.master_seed,
        freeze_limit: Some(10.0 * c.p_max),
    };
    let classical = evolve_classical_ensemble(&cloud, 0.0, &[t1], &params, &opts)?;

    let (region, dynamics, modified_resonances) = if params.effective_epsilon() > 0.0 {
        let (side, _) = island_contexts(&params, guess_upper(config), c.kbar, context_xi(config)?, integ)?;
        let centres = side.iter().map(|r| r.classical.point).collect();
        let region = ResonanceRegion {
            centres,
            semi_q: c.semi_axes.0,
            semi_p: c.semi_axes.1,
        };
        let fixed = side.iter().map(|r| r.fixed).collect();
        (region, side.into_iter().map(|r| r.dynamics).collect(), fixed)
    } else {
        (ResonanceRegion::empty(), Vec::new(), Vec::new())
    };
    let (modified, class) = evolve_modified_ensemble(&cloud, 0.0, &[t1], &params, &region, &dynamics, &opts)?;

    let hq = q.histogram;
    let hm = MomentumHistogram::from_particles(modified.momenta(0), edges.clone(), HistogramLabel::ModifiedClassical)?;
    let hc = MomentumHistogram::from_particles(classical.momenta(0), edges, HistogramLabel::Classical)?;
    let peaks = [&hq, &hm, &hc].map(|h| find_peaks(h, c.smoothing, c.threshold).map_err(|e| e.to_string()));
    let side_peaks = [0, 1, 2].map(|i| peaks[i].as_ref().ok().and_then(|p| p.side_peak()));
    Ok(ComparisonCase {
        epsilon,
        snapshot_time: t1,
        xi,
        quantum: hq,
        modified: hm,
        classical: hc,
        peaks,
        side_peaks,
        resonance_centres: region.centres,
        modified_resonances,
        particles_on_resonance: class.iter().filter(|c| c.is_some()).count(),
        flagged_classical: classical.flagged_count(),
        flagged_modified: modified.flagged_count(),
        quantum_failures: q.failures.len(),
    })
}

pub fn run_comparison(config: &ExperimentConfig) -> Result<ComparisonResults> {
    Ok(ComparisonResults {
        main: run_comparison_case(config, config.params.epsilon)?,
        control: run_comparison_case(config, config.comparison.control_epsilon)?,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResonanceReport {
    pub classical: Vec<FixedPoint>,
    pub modified: Vec<ModifiedResonance>,
    pub xi: f64,
}

/// Classical resonances (lower, centre, upper) and the self-consistent
/// modified side resonances at the configured `k̄`.
pub fn run_resonances(config: &ExperimentConfig) -> Result<ResonanceReport> {
    let params = &config.params;
    let g = guess_upper(config);
    let classical = [g.reflected(), PhasePoint::ORIGIN, g]
        .iter()
        .map(|&x| find_period1_fixed_point(x, params))
        .collect::<Result<Vec<_>>>()?;
    let xi = context_xi(config)?;
    let (modified, _) = island_contexts(params, g, params.kbar, xi, Integrator::default())?;
    Ok(ResonanceReport { classical, modified, xi })
}

/// `(p, factor)` on `points` momenta spanning `[−p_max, p_max]`.
pub fn veff_table(ctx: &crate::moyal::EffectiveContext, p_max: f64, points: usize) -> Vec<(f64, f64)> {
    let points = points.max(2);
    (0..points)
        .map(|i| {
            let p = -p_max + 2.0 * p_max * i as f64 / (points - 1) as f64;
            (p, crate::moyal::veff_factor(p, ctx))
        })
        .collect()
}
