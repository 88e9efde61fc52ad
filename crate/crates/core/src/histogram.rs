//! Momentum distributions on fixed uniform bins.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wave::MomentumAmplitudes;

/// Probability outside the edges above which binning fails.
pub const COVERAGE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HistogramLabel {
    Quantum,
    ModifiedClassical,
    Classical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumHistogram {
    edges: Vec<f64>,
    masses: Vec<f64>,
    label: HistogramLabel,
    /// Fraction of the input that fell outside the edges.
    outside: f64,
}

/// `bins + 1` equally spaced edges spanning `[lo, hi]`.
pub fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Result<Vec<f64>> {
    if bins == 0 || !(hi > lo) {
        return Err(Error::invalid("edges", format!("need bins > 0 and hi > lo, got {bins} on [{lo}, {hi}]")));
    }
    let w = (hi - lo) / bins as f64;
    Ok((0..=bins).map(|i| lo + i as f64 * w).collect())
}

fn check_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 {
        return Err(Error::invalid("edges", "need at least two edges"));
    }
    if edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("edges", "edges must be strictly increasing"));
    }
    Ok(())
}

/// Unnormalized bin accumulator; add masses from any number of sources, then
/// call [`BinAccumulator::finish`] once.
#[derive(Clone, Debug, PartialEq)]
pub struct BinAccumulator {
    edges: Vec<f64>,
    masses: Vec<f64>,
    outside: f64,
    total: f64,
}

impl BinAccumulator {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        check_edges(&edges)?;
        let bins = edges.len() - 1;
        Ok(BinAccumulator {
            edges,
            masses: vec![0.0; bins],
            outside: 0.0,
            total: 0.0,
        })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    fn lo(&self) -> f64 {
        self.edges[0]
    }

    fn hi(&self) -> f64 {
        self.edges[self.edges.len() - 1]
    }

    fn bin_of(&self, p: f64) -> Option<usize> {
        if !(p >= self.lo() && p < self.hi()) {
            return None;
        }
        // partition_point gives the first edge strictly greater than p
        let i = self.edges.partition_point(|&e| e <= p);
        Some(i - 1)
    }

    /// Deposit `mass` at the point `p`.
    pub fn add_point(&mut self, p: f64, mass: f64) {
        self.total += mass;
        match self.bin_of(p) {
            Some(i) => self.masses[i] += mass,
            None => self.outside += mass,
        }
    }

    /// Spread `mass` uniformly over the interval `[a, b)`.
    pub fn add_interval(&mut self, a: f64, b: f64, mass: f64) {
        self.total += mass;
        let width = b - a;
        let inside_lo = a.max(self.lo());
        let inside_hi = b.min(self.hi());
        if inside_hi <= inside_lo {
            self.outside += mass;
            return;
        }
        self.outside += mass * (width - (inside_hi - inside_lo)) / width;
        let first = self.edges.partition_point(|&e| e <= inside_lo) - 1;
        for i in first..self.masses.len() {
            let l = self.edges[i].max(inside_lo);
            let r = self.edges[i + 1].min(inside_hi);
            if r <= l {
                break;
            }
            self.masses[i] += mass * (r - l) / width;
        }
    }

    /// Bin a quantum momentum density; each comb point carries the cell of
    /// width `Δp` centred on it.
    pub fn add_momentum_density(&mut self, phi: &MomentumAmplitudes, weight: f64) {
        let h = 0.5 * phi.dp;
        for (p, a) in phi.p.iter().zip(&phi.amps) {
            let m = a.norm_sqr() * phi.dp * weight;
            if m > 0.0 {
                self.add_interval(p - h, p + h, m);
            }
        }
    }

    /// Add another accumulator bin by bin.
    pub fn merge(&mut self, other: &BinAccumulator) -> Result<()> {
        if other.edges != self.edges {
            return Err(Error::invalid("edges", "cannot merge histograms with different edges"));
        }
        for (a, b) in self.masses.iter_mut().zip(&other.masses) {
            *a += b;
        }
        self.outside += other.outside;
        self.total += other.total;
        Ok(())
    }

    pub fn outside_fraction(&self) -> f64 {
        if self.total > 0.0 {
            self.outside / self.total
        } else {
            0.0
        }
    }

    pub fn finish(self, label: HistogramLabel) -> Result<MomentumHistogram> {
        let outside = self.outside_fraction();
        if outside > COVERAGE_TOLERANCE {
            return Err(Error::HistogramCoverage { outside });
        }
        self.finish_clipped(label)
    }

    /// Like [`BinAccumulator::finish`] but drops mass outside the edges,
    /// recording its fraction instead of failing.
    pub fn finish_clipped(self, label: HistogramLabel) -> Result<MomentumHistogram> {
        let outside = self.outside_fraction();
        let inside: f64 = self.masses.iter().sum();
        if !(inside > 0.0) {
            return Err(Error::invalid("histogram", "no mass inside the edges"));
        }
        let masses = self.masses.iter().map(|m| m / inside).collect();
        Ok(MomentumHistogram {
            edges: self.edges,
            masses,
            label,
            outside,
        })
    }
}

impl MomentumHistogram {
    pub fn from_momentum(phi: &MomentumAmplitudes, edges: Vec<f64>) -> Result<Self> {
        let mut acc = BinAccumulator::new(edges)?;
        acc.add_momentum_density(phi, 1.0);
        acc.finish(HistogramLabel::Quantum)
    }

    pub fn from_particles(
        momenta: impl IntoIterator<Item = f64>,
        edges: Vec<f64>,
        label: HistogramLabel,
    ) -> Result<Self> {
        let mut acc = BinAccumulator::new(edges)?;
        for p in momenta {
            acc.add_point(p, 1.0);
        }
        acc.finish_clipped(label)
    }

    pub fn outside_fraction(&self) -> f64 {
        self.outside
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn label(&self) -> HistogramLabel {
        self.label
    }

    pub fn bins(&self) -> usize {
        self.masses.len()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Width of the narrowest bin.
    pub fn bin_width(&self) -> f64 {
        self.edges
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn mean(&self) -> f64 {
        self.centers().iter().zip(&self.masses).map(|(c, m)| c * m).sum()
    }
}
