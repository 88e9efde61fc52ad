//! Mean momentum of packets started on the classical and on the modified
//! resonance.

use slowmo::quantum::*;
use slowmo::*;

fn main() -> Result<()> {
    let cycles = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let params = Params::standard();
    let grid = build_grid(1024, 4)?;
    for start in [StartRule::Classical, StartRule::Modified] {
        let run = tunneling_series(
            start,
            PhasePoint::new(0.0, 1.0),
            cycles,
            &params,
            XiChoice::Fixed(1.0),
            grid,
            QuantumOptions::default(),
        )?;
        println!("{start:?} start at p = {:.4}, {} steps per cycle", run.fixed_point.point.p, run.steps_per_cycle);
        for (c, (p, v)) in run.series.cycles.iter().zip(run.series.mean_p.iter().zip(&run.series.var_p)) {
            println!("  cycle {c:>3}: ⟨p⟩ = {p:+.5}  Var[p] = {v:.5}");
        }
        if let Some(a) = run.series.oscillation_amplitude(0, cycles) {
            println!("  oscillation amplitude {a:.5}");
        }
    }
    Ok(())
}
