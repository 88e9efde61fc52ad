use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::params::{Modulation, Params};
use crate::quantum::{QuantumOptions, Validation, XiChoice};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub n: usize,
    pub wells: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { n: 1024, wells: 4 }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<SpatialGrid> {
        SpatialGrid::new(self.n, self.wells)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PacketConfig {
    pub xi: XiChoice,
    /// Momentum of the Newton guess for the upper side resonance.
    pub guess_p: f64,
}

impl Default for PacketConfig {
    fn default() -> Self {
        PacketConfig {
            xi: XiChoice::Fixed(1.0),
            guess_p: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PortraitConfig {
    pub side: usize,
    pub p_range: f64,
    pub cycles: usize,
    pub kbars: Vec<f64>,
    pub substeps: usize,
}

impl Default for PortraitConfig {
    fn default() -> Self {
        PortraitConfig {
            side: 24,
            p_range: 2.0,
            cycles: 300,
            kbars: vec![0.25, 0.35],
            substeps: 2048,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuantumRunConfig {
    pub cycles: usize,
    pub steps_per_cycle: usize,
    pub validation: Validation,
}

impl Default for QuantumRunConfig {
    fn default() -> Self {
        QuantumRunConfig {
            cycles: 20,
            steps_per_cycle: 2048,
            validation: Validation::Adapt { max_doublings: 3 },
        }
    }
}

impl QuantumRunConfig {
    pub fn options(&self) -> QuantumOptions {
        QuantumOptions {
            steps_per_cycle: self.steps_per_cycle,
            validation: self.validation,
            keep_states: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KscanConfig {
    pub kbars: Vec<f64>,
    pub cycles: usize,
}

impl Default for KscanConfig {
    fn default() -> Self {
        KscanConfig {
            kbars: vec![0.15, 0.2, 0.25, 0.3],
            cycles: 10,
        }
    }
}

/// Initial distribution of the classical clouds in the comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CloudShape {
    /// Sampled from the Wigner functions of the quantum packets.
    #[default]
    PacketMixture,
    /// Uniform over one well, normal in `p`.
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ComparisonConfig {
    pub kbar: f64,
    pub modulation: Modulation,
    /// Snapshot time, in drive periods after `t = 0`.
    pub cycles: f64,
    pub grid: GridConfig,
    pub quantum_packets: usize,
    pub classical_particles: usize,
    /// Momentum spread of the initial cloud.
    pub sigma_p: f64,
    pub cloud: CloudShape,
    pub bins: usize,
    pub p_max: f64,
    pub steps_per_cycle: usize,
    pub substeps: usize,
    /// Semi-axes `(Δq, Δp)` of the resonance acceptance ellipses.
    pub semi_axes: (f64, f64),
    pub control_epsilon: f64,
    pub smoothing: usize,
    pub threshold: f64,
}

impl Default for ComparisonConfig {
    fn default() -> Self {
        ComparisonConfig {
            kbar: 0.35,
            modulation: Modulation::Sin,
            cycles: 2.25,
            grid: GridConfig { n: 2048, wells: 16 },
            quantum_packets: 64,
            classical_particles: 100_000,
            sigma_p: 0.3,
            cloud: CloudShape::PacketMixture,
            bins: 256,
            p_max: 3.0,
            steps_per_cycle: 2048,
            substeps: 2048,
            semi_axes: (1.0, 0.35),
            control_epsilon: 0.0,
            smoothing: 5,
            threshold: 0.1,
        }
    }
}

impl ComparisonConfig {
    /// Squeeze giving the packets a momentum spread of `sigma_p`.
    pub fn packet_xi(&self) -> f64 {
        2.0 * self.sigma_p * self.sigma_p / self.kbar
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub params: Params,
    pub grid: GridConfig,
    pub packet: PacketConfig,
    pub portrait: PortraitConfig,
    pub tunneling: QuantumRunConfig,
    pub kscan: KscanConfig,
    pub comparison: ComparisonConfig,
    pub master_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            params: Params::standard(),
            grid: GridConfig::default(),
            packet: PacketConfig::default(),
            portrait: PortraitConfig::default(),
            tunneling: QuantumRunConfig::default(),
            kscan: KscanConfig::default(),
            comparison: ComparisonConfig::default(),
            master_seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: ExperimentConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            context: format!("reading {}", path.display()),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.grid.build()?;
        self.comparison.grid.build()?;
        if let XiChoice::Fixed(x) = self.packet.xi {
            if !(x > 0.0) {
                return Err(Error::invalid("packet.xi", format!("{x} is not > 0")));
            }
        }
        self.tunneling.options().validate()?;
        if self.kscan.kbars.is_empty() || self.kscan.kbars.iter().any(|k| !(*k > 0.0)) {
            return Err(Error::invalid("kscan.kbars", "need a nonempty list of positive values"));
        }
        let c = &self.comparison;
        if c.quantum_packets == 0 || c.classical_particles == 0 {
            return Err(Error::invalid("comparison", "ensemble sizes must be positive"));
        }
        if !(c.cycles > 0.0) || !(c.sigma_p > 0.0) || !(c.p_max > 0.0) || c.bins == 0 {
            return Err(Error::invalid("comparison", "cycles, sigma_p, p_max and bins must be positive"));
        }
        if !(0.0..0.5).contains(&c.control_epsilon) {
            return Err(Error::invalid("comparison.control_epsilon", "must lie in [0, 0.5)"));
        }
        Ok(())
    }

    /// Canonical JSON used for hashing and the manifest echo.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Hex SHA-256 of [`Self::canonical_json`].
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical_json().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Output directory precedence: explicit flag, then `SLOWMO_OUT`, then
/// `./slowmo-out`.
pub fn default_output_dir() -> PathBuf {
    std::env::var_os("SLOWMO_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("slowmo-out"))
}
