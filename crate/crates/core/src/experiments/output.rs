use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::config::ExperimentConfig;
use super::runners::{ComparisonCase, PortraitResults, ResonanceReport};
use crate::classical::PortraitOrbit;
use crate::error::{Error, Result};
use crate::series::StroboscopicSeries;

/// One CSV table with a single header row.
#[derive(Clone, Debug, PartialEq)]
pub struct DataFile {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

fn num(x: f64) -> String {
    // shortest round-trip representation, independent of locale
    format!("{x:?}")
}

impl DataFile {
    pub fn portrait(name: impl Into<String>, orbits: &[PortraitOrbit]) -> Self {
        let mut rows = Vec::new();
        for o in orbits {
            for (c, x) in o.points.iter().enumerate() {
                rows.push(vec![o.seed_id.to_string(), c.to_string(), num(x.q), num(x.p)]);
            }
        }
        DataFile {
            name: name.into(),
            header: vec!["seed_id", "cycle", "q", "p"],
            rows,
        }
    }

    pub fn series(name: impl Into<String>, s: &StroboscopicSeries) -> Self {
        let rows = (0..s.len())
            .map(|i| vec![s.cycles[i].to_string(), num(s.times[i]), num(s.mean_p[i]), num(s.var_p[i])])
            .collect();
        DataFile {
            name: name.into(),
            header: vec!["cycle", "time", "mean_p", "var_p"],
            rows,
        }
    }

    pub fn histograms(name: impl Into<String>, case: &ComparisonCase) -> Self {
        let centres = case.classical.centers();
        let rows = centres
            .iter()
            .enumerate()
            .map(|(i, c)| {
                vec![
                    num(*c),
                    num(case.quantum.masses()[i]),
                    num(case.modified.masses()[i]),
                    num(case.classical.masses()[i]),
                ]
            })
            .collect();
        DataFile {
            name: name.into(),
            header: vec!["bin_center", "mass_quantum", "mass_modified", "mass_classical"],
            rows,
        }
    }

    pub fn resonances(name: impl Into<String>, report: &ResonanceReport) -> Self {
        let mut rows = Vec::new();
        let mut push = |kind: &str, kbar: f64, fp: &crate::classical::FixedPoint| {
            rows.push(vec![
                kind.to_string(),
                num(kbar),
                num(fp.point.q),
                num(fp.point.p),
                num(fp.trace()),
                num(fp.det()),
                fp.stable.to_string(),
                num(fp.residual),
            ]);
        };
        for fp in &report.classical {
            push("classical", 0.0, fp);
        }
        for r in &report.modified {
            push("modified", r.context.kbar, &r.fixed);
        }
        DataFile {
            name: name.into(),
            header: vec!["kind", "kbar", "q", "p", "trace", "det", "stable", "residual"],
            rows,
        }
    }

    pub fn veff(name: impl Into<String>, table: &[(f64, f64)]) -> Self {
        DataFile {
            name: name.into(),
            header: vec!["p", "factor"],
            rows: table.iter().map(|(p, f)| vec![num(*p), num(*f)]).collect(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(&self.name);
        let mut w = csv::Writer::from_path(&path).map_err(|source| Error::Csv {
            path: path.clone(),
            source,
        })?;
        let wrap = |source| Error::Csv {
            path: path.clone(),
            source,
        };
        w.write_record(&self.header).map_err(wrap)?;
        for r in &self.rows {
            w.write_record(r).map_err(wrap)?;
        }
        w.flush().map_err(|source| Error::Io {
            context: format!("writing {}", path.display()),
            source,
        })?;
        Ok(path)
    }
}

pub fn portrait_files(res: &PortraitResults) -> Vec<DataFile> {
    let mut files = vec![DataFile::portrait("portrait_original.csv", &res.original)];
    for e in &res.effective {
        files.push(DataFile::portrait(format!("portrait_effective_k{}.csv", e.kbar), &e.orbits));
    }
    files
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config_hash: String,
    master_seed: u64,
    config: &'a ExperimentConfig,
    outputs: Vec<String>,
    diagnostics: Value,
}

/// Write `files` and a `manifest.json` into `dir`. Output depends only on
/// the arguments.
pub fn emit_outputs(
    dir: &Path,
    command: &str,
    config: &ExperimentConfig,
    files: &[DataFile],
    diagnostics: Value,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        context: format!("creating {}", dir.display()),
        source,
    })?;
    let mut written = Vec::with_capacity(files.len() + 1);
    for f in files {
        written.push(f.write(dir)?);
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        config_hash: config.hash(),
        master_seed: config.master_seed,
        config,
        outputs: files.iter().map(|f| f.name.clone()).collect(),
        diagnostics,
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest)?;
    fs::write(&path, text + "\n").map_err(|source| Error::Io {
        context: format!("writing {}", path.display()),
        source,
    })?;
    written.push(path);
    Ok(written)
}

/// Summary of a comparison case for the manifest.
pub fn comparison_diagnostics(case: &ComparisonCase) -> Value {
    json!({
        "epsilon": case.epsilon,
        "snapshot_time": case.snapshot_time,
        "xi": case.xi,
        "bin_width": case.bin_width(),
        "side_peak_quantum": case.side_peaks[0],
        "side_peak_modified": case.side_peaks[1],
        "side_peak_classical": case.side_peaks[2],
        "peaks": case.peaks,
        "resonance_centres": case.resonance_centres,
        "modified_resonances": case.modified_resonances,
        "particles_on_resonance": case.particles_on_resonance,
        "flagged_classical": case.flagged_classical,
        "flagged_modified": case.flagged_modified,
        "outside_quantum": case.quantum.outside_fraction(),
        "outside_classical": case.classical.outside_fraction(),
        "outside_modified": case.modified.outside_fraction(),
        "quantum_failures": case.quantum_failures,
    })
}
