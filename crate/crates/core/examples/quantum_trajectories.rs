//! Recoil-interrupted trajectories and the heating they cause.

use slowmo::qmc::*;
use slowmo::*;

fn main() -> Result<()> {
    let grid = build_grid(256, 2)?;
    let packets = vec![GaussianPacket::new(0.0, 0.0, 1.0); 100];
    let edges = uniform_edges(-6.0, 6.0, 96)?;
    for rate in [0.0, 0.1, 0.3] {
        let mut params = Params::standard();
        if rate > 0.0 {
            params = params.with_spont(SpontaneousSettings::new(rate, RecoilModel::Dipole, true)?);
        }
        let d = ensemble_distribution(&packets, grid, TimeWindow::cycles(&params, 5), &params, 512, 7, edges.clone())?;
        println!(
            "Γ = {rate}: {} recoils, Var[p] by cycle {:.4?}",
            d.total_jumps,
            d.series.var_p
        );
    }

    let params = Params::standard().with_spont(SpontaneousSettings::new(0.5, RecoilModel::Dipole, true)?);
    let psi = init_packet(GaussianPacket::new(0.0, 1.0, 1.0), grid, params.kbar)?;
    let r = run_quantum_trajectory(&psi, TimeWindow::cycles(&params, 2), &params, 512, 7, 0)?;
    for (t, k) in r.jumps.times.iter().zip(&r.jumps.kicks) {
        println!("recoil at t = {t:.3}: Δp = {k:+.4}");
    }
    Ok(())
}
