//! Self-consistent modified resonances and orbits of the compressed
//! potential around them.

use slowmo::classical::PERIOD;
use slowmo::moyal::{effective_portrait, find_modified_resonance};
use slowmo::*;

fn main() -> Result<()> {
    let params = Params::standard();
    let guess = PhasePoint::new(0.0, 1.0);
    let classical = find_period1_fixed_point(guess, &params)?;
    println!("classical p* = {:.4}", classical.point.p);
    for kbar in [0.15, 0.25, 0.35] {
        let r = find_modified_resonance(guess, &params, kbar, 1.0)?;
        println!(
            "k̄ = {kbar}: p* = {:.4} after {} outer iterations, compression {:.4}",
            r.fixed.point.p,
            r.outer_iterations,
            r.context.compression()
        );
        let seeds: Vec<PhasePoint> = (1..=3).map(|i| PhasePoint::new(0.1 * i as f64, r.fixed.point.p)).collect();
        let orbits = effective_portrait(&seeds, 50, std::slice::from_ref(&r.dynamics), Integrator::default())?;
        for o in &orbits {
            let width = o.points.iter().map(|x| (x.p - r.fixed.point.p).abs()).fold(0.0, f64::max);
            println!("  seed q = {:.1}: max |p − p*| = {width:.4} over {} periods", o.seed.q, o.points.len() - 1);
        }
    }
    println!("period {PERIOD:.4}");
    Ok(())
}
