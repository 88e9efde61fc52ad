use serde::{Deserialize, Serialize};

/// Per-cycle stroboscopic observables. Entry `s` belongs to the snapshot at
/// `t = phase + 2πs`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StroboscopicSeries {
    pub cycles: Vec<usize>,
    pub times: Vec<f64>,
    pub mean_p: Vec<f64>,
    pub var_p: Vec<f64>,
}

impl StroboscopicSeries {
    pub fn with_capacity(n: usize) -> Self {
        StroboscopicSeries {
            cycles: Vec::with_capacity(n),
            times: Vec::with_capacity(n),
            mean_p: Vec::with_capacity(n),
            var_p: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, cycle: usize, time: f64, mean_p: f64, var_p: f64) {
        self.cycles.push(cycle);
        self.times.push(time);
        self.mean_p.push(mean_p);
        self.var_p.push(var_p.max(0.0));
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Mean of `⟨p⟩` over the snapshots with `lo <= cycle <= hi`.
    pub fn average_mean_p(&self, lo: usize, hi: usize) -> Option<f64> {
        let (mut s, mut n) = (0.0, 0usize);
        for (&c, &p) in self.cycles.iter().zip(&self.mean_p) {
            if (lo..=hi).contains(&c) {
                s += p;
                n += 1;
            }
        }
        (n > 0).then(|| s / n as f64)
    }

    /// Centred moving average of `⟨p⟩` over `2·half + 1` snapshots, truncated at
    /// the ends.
    pub fn smoothed_mean_p(&self, half: usize) -> Vec<f64> {
        let n = self.mean_p.len();
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(half);
                let hi = (i + half).min(n - 1);
                self.mean_p[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
            })
            .collect()
    }

    /// Half peak-to-peak spread of `⟨p⟩` about its least-squares line over
    /// cycles `lo..=hi`.
    pub fn oscillation_amplitude(&self, lo: usize, hi: usize) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .cycles
            .iter()
            .zip(&self.mean_p)
            .filter(|(c, _)| (lo..=hi).contains(*c))
            .map(|(&c, &p)| (c as f64, p))
            .collect();
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
        let slope = sxy / sxx;
        let (mut lo_r, mut hi_r) = (f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in pts {
            let r = y - my - slope * (x - mx);
            lo_r = lo_r.min(r);
            hi_r = hi_r.max(r);
        }
        Some(0.5 * (hi_r - lo_r))
    }
}
