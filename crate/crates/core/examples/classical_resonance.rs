//! Period-one resonances of the driven pendulum and a short look at the
//! stroboscopic portrait around them.

use slowmo::classical::{portrait_seed_lattice, PERIOD};
use slowmo::*;

fn main() -> Result<()> {
    let params = Params::standard();
    for guess in [PhasePoint::new(0.0, 1.0), PhasePoint::ORIGIN, PhasePoint::new(0.0, -1.0)] {
        let fp = find_period1_fixed_point(guess, &params)?;
        println!(
            "guess p = {:+.1}: q* = {:+.3e}, p* = {:+.5}, trace {:+.4}, stable {}",
            guess.p,
            fp.point.q,
            fp.point.p,
            fp.trace(),
            fp.stable
        );
    }

    let seeds = portrait_seed_lattice(6, 2.0);
    let orbits = poincare_portrait(&seeds, 100, &params, Integrator::default())?;
    for o in orbits.iter().filter(|o| o.error.is_none()) {
        let (lo, hi) = o
            .points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x.p), b.max(x.p)));
        println!("seed ({:+.2}, {:+.2}): p in [{lo:+.3}, {hi:+.3}]", o.seed.q, o.seed.p);
    }
    println!("drive period {PERIOD:.6}");
    Ok(())
}
