use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::histogram::MomentumHistogram;

/// Peaks below this `|p|` are treated as the central peak.
pub const SIDE_PEAK_MIN_P: f64 = 0.3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakSet {
    /// Centroids, ascending.
    pub positions: Vec<f64>,
    pub masses: Vec<f64>,
    pub smoothing: usize,
}

fn moving_average(x: &[f64], width: usize) -> Vec<f64> {
    let half = width / 2;
    let n = x.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            x[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect()
}

/// Smooth with a centred `smoothing`-bin moving average, keep local maxima
/// above `threshold·max`, and locate each by the mass-weighted centroid of
/// the contiguous bins above half its height, bounded by the valleys on
/// either side.
pub fn find_peaks(hist: &MomentumHistogram, smoothing: usize, threshold: f64) -> Result<PeakSet> {
    let m = hist.masses();
    let s = moving_average(m, smoothing.max(1));
    let top = s.iter().cloned().fold(0.0, f64::max);
    let centres = hist.centers();
    let n = s.len();
    let mut found: Vec<(usize, f64, f64, f64)> = Vec::new();
    let mut i = 0;
    while i < n {
        // treat a plateau as one candidate
        let mut j = i;
        while j + 1 < n && s[j + 1] == s[i] {
            j += 1;
        }
        let rises = i == 0 || s[i - 1] < s[i];
        let falls = j == n - 1 || s[j + 1] < s[i];
        let interior = i > 0 || j < n - 1;
        if rises && falls && interior && s[i] > threshold * top && s[i] > 0.0 {
            let k = (i + j) / 2;
            let half = 0.5 * s[k];
            // stop at half height or at the valley next to a neighbouring peak
            let mut lo = k;
            while lo > 0 && s[lo - 1] >= half && s[lo - 1] <= s[lo] {
                lo -= 1;
            }
            let mut hi = k;
            while hi + 1 < n && s[hi + 1] >= half && s[hi + 1] <= s[hi] {
                hi += 1;
            }
            let mass: f64 = m[lo..=hi].iter().sum();
            let pos = if mass > 0.0 {
                (lo..=hi).map(|b| centres[b] * m[b]).sum::<f64>() / mass
            } else {
                centres[k]
            };
            found.push((k, s[k], pos, mass));
        }
        i = j + 1;
    }
    // enforce a separation of at least two bins, keeping the taller peak
    found.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut kept: Vec<(usize, f64, f64, f64)> = Vec::new();
    for p in found {
        if kept.iter().all(|q| q.0.abs_diff(p.0) >= 2) {
            kept.push(p);
        }
    }
    if kept.is_empty() {
        return Err(Error::NoPeaks);
    }
    kept.sort_by(|a, b| a.2.total_cmp(&b.2));
    Ok(PeakSet {
        positions: kept.iter().map(|p| p.2).collect(),
        masses: kept.iter().map(|p| p.3).collect(),
        smoothing,
    })
}

impl PeakSet {
    /// `|p|` of the side peaks: the heaviest peak with `|p| ≥ 0.3` on each
    /// side, averaged over the sides present.
    pub fn side_peak(&self) -> Option<f64> {
        let pick = |sign: f64| {
            self.positions
                .iter()
                .zip(&self.masses)
                .filter(|(p, _)| sign * **p >= SIDE_PEAK_MIN_P)
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(p, _)| p.abs())
        };
        match (pick(1.0), pick(-1.0)) {
            (Some(a), Some(b)) => Some(0.5 * (a + b)),
            (a, b) => a.or(b),
        }
    }
}
