//! Right-hand sides of the phase-space evolution for a Gaussian state:
//! truncated series, the closed shift form and the classical limit.

use std::f64::consts::PI;

use slowmo::moyal::*;
use slowmo::*;

fn main() -> Result<()> {
    let params = Params::standard();
    let kbar = params.kbar;
    let pk = GaussianPacket::new(0.3, 0.84, 1.0);
    let w = WignerGridState::gaussian(pk, kbar, 256, 256, (-PI, PI), (pk.p0 - 5.0, pk.p0 + 5.0))?;
    let t = 0.7;
    let shift = moyal_shift_rhs(&w, t, &params, ShiftMode::Spectral)?;
    let scale = shift.values().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for order in [1, 3, 5, 9, 15] {
        let s = moyal_series_rhs(&w, t, &params, order)?;
        let d = s.values().iter().zip(shift.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        println!("order {order:>2}: max |series − shift| / max |shift| = {:.3e}", d / scale);
    }
    let liouville = classical_liouville_rhs(&w, t, &params)?;
    let d = liouville.values().iter().zip(shift.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!("classical Liouville departs by {:.3e} relative", d / scale);
    let ctx = EffectiveContext::new(pk.p0, pk.xi, kbar)?;
    println!("factor at the packet centre {:.10} = exp(−k̄/4) = {:.10}", veff_factor(pk.p0, &ctx), (-kbar / 4.0).exp());
    Ok(())
}
