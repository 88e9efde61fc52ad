use serde::{Deserialize, Serialize};

use super::SplitOperator;
use crate::classical::PERIOD;
use crate::error::{Error, Result};
use crate::params::Params;
use crate::series::StroboscopicSeries;
use crate::wave::WaveFunction;

/// Largest change in the final `⟨p⟩` accepted when doubling the step count.
pub const VALIDATION_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Validation {
    Off,
    /// Rerun once at twice the step count; fail if the final `⟨p⟩` moves.
    Check,
    /// Keep doubling until two successive runs agree.
    Adapt { max_doublings: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumOptions {
    pub steps_per_cycle: usize,
    pub validation: Validation,
    /// Keep the state at every snapshot.
    pub keep_states: bool,
}

impl Default for QuantumOptions {
    fn default() -> Self {
        QuantumOptions {
            steps_per_cycle: 2048,
            validation: Validation::Adapt { max_doublings: 3 },
            keep_states: false,
        }
    }
}

impl QuantumOptions {
    pub fn unvalidated(steps_per_cycle: usize) -> Self {
        QuantumOptions {
            steps_per_cycle,
            validation: Validation::Off,
            keep_states: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps_per_cycle < 256 {
            return Err(Error::invalid(
                "steps_per_cycle",
                format!("{} is below the minimum of 256", self.steps_per_cycle),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub coarse_steps: usize,
    pub fine_steps: usize,
    pub coarse_final_p: f64,
    pub fine_final_p: f64,
}

impl ValidationReport {
    pub fn change(&self) -> f64 {
        (self.fine_final_p - self.coarse_final_p).abs()
    }
}

#[derive(Clone, Debug)]
pub struct Evolution {
    pub series: StroboscopicSeries,
    /// Snapshot states when requested; always holds the final state.
    pub states: Vec<WaveFunction>,
    pub steps_per_cycle: usize,
    pub validation: Option<ValidationReport>,
}

impl Evolution {
    pub fn final_state(&self) -> &WaveFunction {
        self.states.last().expect("evolution keeps the final state")
    }
}

pub(crate) fn run_cycles(
    psi0: &WaveFunction,
    n_cycles: usize,
    params: &Params,
    steps_per_cycle: usize,
    keep_states: bool,
) -> Result<Evolution> {
    let mut op = SplitOperator::new(*psi0.grid(), &params.with_kbar(psi0.kbar()))?;
    let phase = params.snapshot_phase();
    let mut psi = psi0.clone();
    let mut series = StroboscopicSeries::with_capacity(n_cycles + 1);
    let mut states = Vec::new();
    let record = |series: &mut StroboscopicSeries, s: usize, t: f64, psi: &WaveFunction| {
        let m = psi.moments();
        series.push(s, t, m.mean_p, m.var_p);
    };
    record(&mut series, 0, phase, &psi);
    if keep_states {
        states.push(psi.clone());
    }
    for s in 0..n_cycles {
        let t0 = phase + s as f64 * PERIOD;
        let t1 = phase + (s + 1) as f64 * PERIOD;
        op.advance(&mut psi, t0, t1, steps_per_cycle)?;
        record(&mut series, s + 1, t1, &psi);
        if keep_states {
            states.push(psi.clone());
        }
    }
    if !keep_states {
        states.push(psi);
    }
    Ok(Evolution {
        series,
        states,
        steps_per_cycle,
        validation: None,
    })
}

fn final_p(e: &Evolution) -> f64 {
    *e.series.mean_p.last().expect("series is never empty")
}

/// Evolve `psi0`, given at the snapshot phase, over `n_cycles` drive periods
/// and record `⟨p⟩`, `Var[p]` at every snapshot.
pub fn evolve_cycles(
    psi0: &WaveFunction,
    n_cycles: usize,
    params: &Params,
    opts: QuantumOptions,
) -> Result<Evolution> {
    opts.validate()?;
    let mut steps = opts.steps_per_cycle;
    let mut run = run_cycles(psi0, n_cycles, params, steps, opts.keep_states)?;
    let max_doublings = match opts.validation {
        Validation::Off => return Ok(run),
        Validation::Check => 1,
        Validation::Adapt { max_doublings } => max_doublings.max(1),
    };
    for _ in 0..max_doublings {
        let finer = run_cycles(psi0, n_cycles, params, 2 * steps, opts.keep_states)?;
        let report = ValidationReport {
            coarse_steps: steps,
            fine_steps: 2 * steps,
            coarse_final_p: final_p(&run),
            fine_final_p: final_p(&finer),
        };
        if report.change() < VALIDATION_TOLERANCE {
            run.validation = Some(report);
            return Ok(run);
        }
        steps *= 2;
        run = finer;
        run.validation = Some(report);
    }
    let r = run.validation.expect("at least one doubling ran");
    Err(Error::StepValidation {
        coarse: r.coarse_final_p,
        fine: r.fine_final_p,
        coarse_steps: r.coarse_steps,
        fine_steps: r.fine_steps,
    })
}
