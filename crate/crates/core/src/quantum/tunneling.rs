use serde::{Deserialize, Serialize};

use super::{evolve_cycles, QuantumOptions, ValidationReport};
use crate::classical::{find_period1_fixed_point, FixedPoint, PhasePoint};
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::moyal::find_modified_resonance;
use crate::params::Params;
use crate::series::StroboscopicSeries;
use crate::wave::{init_packet, GaussianPacket};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartRule {
    /// Packet centred on the classical period-one resonance.
    Classical,
    /// Packet centred on the self-consistent resonance of the effective
    /// dynamics.
    Modified,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiChoice {
    Fixed(f64),
    /// Match the packet to the linearized island of the classical resonance.
    Auto,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TunnelingRun {
    pub start: StartRule,
    pub fixed_point: FixedPoint,
    pub xi: f64,
    pub series: StroboscopicSeries,
    pub steps_per_cycle: usize,
    pub validation: Option<ValidationReport>,
}

/// Locate the start point, centre a packet on it at the snapshot phase and
/// record `⟨p⟩`, `Var[p]` per cycle.
pub fn tunneling_series(
    start: StartRule,
    guess: PhasePoint,
    n_cycles: usize,
    params: &Params,
    xi: XiChoice,
    grid: SpatialGrid,
    opts: QuantumOptions,
) -> Result<TunnelingRun> {
    params.validate()?;
    let classical = find_period1_fixed_point(guess, params)?;
    let xi = match xi {
        XiChoice::Fixed(x) => x,
        XiChoice::Auto => classical.matched_xi().ok_or_else(|| {
            Error::invalid("xi", "classical resonance is not elliptic; cannot match ξ")
        })?,
    };
    let fixed_point = match start {
        StartRule::Classical => classical,
        StartRule::Modified => find_modified_resonance(guess, params, params.kbar, xi)?.fixed,
    };
    let packet = GaussianPacket::new(fixed_point.point.q, fixed_point.point.p, xi);
    let psi = init_packet(packet, grid, params.kbar)?;
    let evo = evolve_cycles(&psi, n_cycles, params, opts)?;
    Ok(TunnelingRun {
        start,
        fixed_point,
        xi,
        series: evo.series,
        steps_per_cycle: evo.steps_per_cycle,
        validation: evo.validation,
    })
}
