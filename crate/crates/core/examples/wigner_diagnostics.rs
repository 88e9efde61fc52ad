//! Wigner functions of a single packet and of a two-packet superposition.

use slowmo::*;

fn describe(name: &str, psi: &WaveFunction) {
    let w = wigner_of_wavefunction(psi);
    // the periodic image interferes half a domain away; look near q = 0 only
    let reach = 0.25 * psi.grid().length();
    let mut negative = 0.0;
    for (i, q) in w.q().iter().enumerate() {
        if q.abs() < reach {
            negative += (0..w.p().len()).map(|l| (-w.at(i, l)).max(0.0)).sum::<f64>();
        }
    }
    negative *= w.dq() * w.dp();
    println!(
        "{name}: total {:.6}, purity {:.6}, negative volume {negative:.4}",
        w.total(),
        w.purity()
    );
}

fn main() -> Result<()> {
    let kbar = 0.25;
    let grid = build_grid(256, 2)?;
    let a = init_packet(GaussianPacket::new(0.0, 1.0, 1.0), grid, kbar)?;
    let b = init_packet(GaussianPacket::new(0.0, -1.0, 1.0), grid, kbar)?;
    describe("single packet", &a);
    let sum = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x + y).collect();
    describe("superposition", &WaveFunction::from_amplitudes(grid, kbar, sum)?);
    Ok(())
}
