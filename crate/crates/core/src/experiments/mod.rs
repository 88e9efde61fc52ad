//! Scenario runners, peak analysis, configuration and file output.

mod config;
mod output;
mod peaks;
mod runners;

pub use config::{
    default_output_dir, CloudShape, ComparisonConfig, ExperimentConfig, GridConfig, KscanConfig, PacketConfig,
    PortraitConfig, QuantumRunConfig,
};
pub use output::{comparison_diagnostics, emit_outputs, portrait_files, DataFile};
pub use peaks::{find_peaks, PeakSet, SIDE_PEAK_MIN_P};
pub use runners::{
    run_comparison, run_comparison_case, run_kbar_scan, run_portraits, run_resonances,
    run_tunneling, veff_table, ComparisonCase, ComparisonResults, EffectivePortrait,
    PortraitResults, ResonanceReport,
};
