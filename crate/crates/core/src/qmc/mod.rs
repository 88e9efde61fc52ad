//! Recoil events on top of unitary propagation, and ensemble aggregation.

mod trajectory;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{RecoilModel, SpontaneousSettings};
use crate::wave::WaveFunction;

pub use trajectory::{
    ensemble_distribution, run_quantum_trajectory, EnsembleDistribution, TimeWindow,
    TrajectoryResult,
};

/// What a random stream is used for. Streams with different purposes never
/// overlap for the same master seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Purpose {
    QuantumJumps = 1,
    ClassicalJumps = 2,
    ClassicalCloud = 3,
    PacketCloud = 4,
}

/// Counter-based stream `index` of `purpose` under `master_seed`.
pub fn stream_rng(master_seed: u64, purpose: Purpose, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((purpose as u64) << 56) | (index & ((1 << 56) - 1)));
    rng
}

/// Recoil event times and momentum kicks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct JumpSchedule {
    pub times: Vec<f64>,
    pub kicks: Vec<f64>,
}

impl JumpSchedule {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Projected recoil `u ∈ [−1, 1]`.
pub fn sample_recoil<R: Rng + ?Sized>(model: RecoilModel, rng: &mut R) -> f64 {
    match model {
        RecoilModel::Off => 0.0,
        RecoilModel::Uniform => rng.random_range(-1.0..=1.0),
        RecoilModel::Dipole => loop {
            // density 3/8 (1 + u²) under the envelope 3/4
            let u: f64 = rng.random_range(-1.0..=1.0);
            if rng.random::<f64>() * 2.0 <= 1.0 + u * u {
                break u;
            }
        },
    }
}

/// Poisson events at rate `Γ` on `(t0, t1)` with kicks `k̄(u + u_stim)`.
pub fn draw_jump_schedule<R: Rng + ?Sized>(
    t0: f64,
    t1: f64,
    settings: &SpontaneousSettings,
    kbar: f64,
    rng: &mut R,
) -> Result<JumpSchedule> {
    if !(t1 > t0) {
        return Err(Error::invalid("t1", "must exceed t0"));
    }
    settings.validate()?;
    let mut out = JumpSchedule::default();
    if settings.is_off() {
        return Ok(out);
    }
    let gap = Exp::new(settings.rate).map_err(|e| Error::invalid("spont.rate", e.to_string()))?;
    let mut t = t0;
    loop {
        t += gap.sample(rng);
        if t >= t1 {
            break;
        }
        let mut u = sample_recoil(settings.recoil, rng);
        if settings.include_stimulated {
            u += if rng.random::<bool>() { 1.0 } else { -1.0 };
        }
        out.times.push(t);
        out.kicks.push(kbar * u);
    }
    Ok(out)
}

/// Displace `psi` in momentum by `dp`, rounded to the nearest comb multiple
/// so that the state stays periodic on the grid.
pub fn apply_recoil(psi: &WaveFunction, dp: f64) -> Result<WaveFunction> {
    let mut out = psi.clone();
    apply_recoil_in_place(&mut out, dp)?;
    Ok(out)
}

pub(crate) fn apply_recoil_in_place(psi: &mut WaveFunction, dp: f64) -> Result<()> {
    let g = *psi.grid();
    let comb = g.dp(psi.kbar());
    let steps = (dp / comb).round();
    if steps == 0.0 {
        return Ok(());
    }
    let shift = steps * comb;
    let kb = psi.kbar();
    for (j, a) in psi.amplitudes_mut().iter_mut().enumerate() {
        *a *= Complex64::from_polar(1.0, shift * g.position(j) / kb);
    }
    psi.check_band_edge()
}
