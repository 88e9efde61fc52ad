//! Early mean momentum of modified-start packets for several values of k̄.

use slowmo::quantum::*;
use slowmo::*;

fn main() -> Result<()> {
    let grid = build_grid(1024, 4)?;
    for kbar in [0.15, 0.2, 0.25, 0.3] {
        let run = tunneling_series(
            StartRule::Modified,
            PhasePoint::new(0.0, 1.0),
            5,
            &Params::standard().with_kbar(kbar),
            XiChoice::Fixed(1.0),
            grid,
            QuantumOptions::unvalidated(2048),
        )?;
        println!(
            "k̄ = {kbar:.2}: start p = {:.4}, mean ⟨p⟩ over cycles 0..4 = {:.4}",
            run.fixed_point.point.p,
            run.series.average_mean_p(0, 4).unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
