//! Classical, effective-potential and quantum dynamics of atoms in an
//! amplitude-modulated standing wave.
//!
//! The model Hamiltonian is `H = p²/2 − κ(1 − 2ε m(t)) cos q` with scaled
//! Planck constant `k̄`. Period-one resonances of the classical stroboscopic
//! map trap quantum packets, which then move at smaller momentum than the
//! classical resonance. The [`moyal`] module explains the shift through an
//! effective potential compressed by `exp(−k̄/(4ξ))`.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod classical;
pub mod error;
pub mod experiments;
pub mod fft;
pub mod grid;
pub mod histogram;
pub mod moyal;
pub mod params;
pub mod qmc;
pub mod quantum;
pub mod series;
pub mod wave;
pub mod wigner;

pub use classical::{
    find_period1_fixed_point, integrate_trajectory, poincare_portrait, potential_and_force,
    stroboscopic_map, ClassicalEnsemble, FixedPoint, Integrator, PhasePoint,
};
pub use error::{Error, Result};
pub use grid::{build_grid, SpatialGrid};
pub use histogram::{uniform_edges, HistogramLabel, MomentumHistogram};
pub use moyal::{effective_force, find_modified_resonance, veff_factor, EffectiveContext};
pub use params::{Modulation, Params, RecoilModel, SpontaneousSettings};
pub use series::StroboscopicSeries;
pub use wave::{init_packet, GaussianPacket, WaveFunction};
pub use wigner::{wigner_of_wavefunction, WignerFunction};
