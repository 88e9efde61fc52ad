use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use slowmo::experiments::{
    comparison_diagnostics, emit_outputs, portrait_files, run_comparison, run_kbar_scan,
    run_portraits, run_resonances, run_tunneling, veff_table, DataFile, ExperimentConfig,
};
use slowmo::moyal::EffectiveContext;
use slowmo::quantum::{StartRule, XiChoice};
use slowmo::{Error, Result};

#[derive(Parser)]
#[command(name = "slowmo", version, about = "Resonance dynamics in a modulated standing wave")]
struct Cli {
    /// JSON experiment configuration; missing fields take defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, env = "SLOWMO_OUT")]
    out: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    steps_per_cycle: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Start {
    Classical,
    Modified,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Stroboscopic portraits of the original and effective dynamics.
    Portrait,
    /// Mean-momentum series of packets started on a resonance.
    Tunneling {
        #[arg(long, value_enum, default_value = "both")]
        start: Start,
    },
    /// Modified-start series for every configured k̄.
    Kscan,
    /// Quantum, modified-classical and classical momentum histograms.
    Compare,
    /// Classical and self-consistent modified resonances.
    Resonance,
    /// Tabulate the effective-potential factor.
    Veff {
        /// Packet momentum; defaults to the modified resonance.
        #[arg(long)]
        p_mean: Option<f64>,
        #[arg(long, default_value_t = 3.0)]
        p_max: f64,
        #[arg(long, default_value_t = 601)]
        points: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Portrait => "portrait",
            Command::Tunneling { .. } => "tunneling",
            Command::Kscan => "kscan",
            Command::Compare => "compare",
            Command::Resonance => "resonance",
            Command::Veff { .. } => "veff",
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut c = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        c.master_seed = s;
    }
    if let Some(n) = cli.steps_per_cycle {
        c.tunneling.steps_per_cycle = n;
        c.comparison.steps_per_cycle = n;
    }
    c.validate()?;
    Ok(c)
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let config = load_config(cli)?;
    let out = cli
        .out
        .clone()
        .unwrap_or_else(slowmo::experiments::default_output_dir);
    let name = cli.command.name();
    let (files, diagnostics) = match &cli.command {
        Command::Portrait => {
            let r = run_portraits(&config)?;
            let d = json!({
                "original_resonances": r.original_resonances,
                "effective": r.effective.iter().map(|e| json!({"kbar": e.kbar, "xi": e.xi, "resonances": e.resonances})).collect::<Vec<_>>(),
                "failed_orbits": r.original.iter().filter(|o| o.error.is_some()).count(),
            });
            (portrait_files(&r), d)
        }
        Command::Tunneling { start } => {
            let starts: &[StartRule] = match start {
                Start::Classical => &[StartRule::Classical],
                Start::Modified => &[StartRule::Modified],
                Start::Both => &[StartRule::Classical, StartRule::Modified],
            };
            let mut files = Vec::new();
            let mut diag = Vec::new();
            for &s in starts {
                let r = run_tunneling(&config, s)?;
                let label = match s {
                    StartRule::Classical => "classical",
                    StartRule::Modified => "modified",
                };
                files.push(DataFile::series(format!("series_{label}.csv"), &r.series));
                diag.push(json!({
                    "start": label,
                    "fixed_point": r.fixed_point,
                    "xi": r.xi,
                    "steps_per_cycle": r.steps_per_cycle,
                    "validation": r.validation,
                    "oscillation_amplitude": r.series.oscillation_amplitude(0, 20),
                }));
            }
            (files, json!(diag))
        }
        Command::Kscan => {
            let runs = run_kbar_scan(&config)?;
            let mut files = Vec::new();
            let mut diag = Vec::new();
            for (i, (k, r)) in config.kscan.kbars.iter().zip(&runs).enumerate() {
                files.push(DataFile::series(format!("series_kbar_{i:02}_{k}.csv"), &r.series));
                diag.push(json!({
                    "kbar": k,
                    "fixed_point": r.fixed_point,
                    "xi": r.xi,
                    "steps_per_cycle": r.steps_per_cycle,
                    "validation": r.validation,
                    "mean_p_cycles_0_4": r.series.average_mean_p(0, 4),
                }));
            }
            (files, json!(diag))
        }
        Command::Compare => {
            let r = run_comparison(&config)?;
            let files = vec![
                DataFile::histograms("histogram_main.csv", &r.main),
                DataFile::histograms("histogram_control.csv", &r.control),
            ];
            let d = json!({
                "main": comparison_diagnostics(&r.main),
                "control": comparison_diagnostics(&r.control),
            });
            (files, d)
        }
        Command::Resonance => {
            let r = run_resonances(&config)?;
            (vec![DataFile::resonances("resonances.csv", &r)], json!(r))
        }
        Command::Veff { p_mean, p_max, points } => {
            let kbar = config.params.kbar;
            let (p_mean, xi) = match p_mean {
                Some(p) => (*p, match config.packet.xi {
                    XiChoice::Fixed(x) => x,
                    XiChoice::Auto => run_resonances(&config)?.xi,
                }),
                None => {
                    let r = run_resonances(&config)?;
                    let upper = r.modified.last().ok_or_else(|| Error::invalid("resonance", "none found"))?;
                    (upper.fixed.point.p, r.xi)
                }
            };
            let ctx = EffectiveContext::new(p_mean, xi, kbar)?;
            let table = veff_table(&ctx, *p_max, *points);
            (vec![DataFile::veff("veff.csv", &table)], json!({"context": ctx, "compression": ctx.compression()}))
        }
    };
    emit_outputs(&out, name, &config, &files, diagnostics)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(Error::InvalidParameter {
                name: "workers",
                reason: e.to_string(),
            }),
        },
        None => run(&cli),
    };
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::FAILURE
        }
    }
}
