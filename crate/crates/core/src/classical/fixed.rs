use serde::{Deserialize, Serialize};

use super::{stroboscopic_map_with, ForceField, Integrator, PhasePoint};
use crate::error::{Error, Result};
use crate::grid::wrap_angle;
use crate::params::Params;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    /// Central finite-difference step for the Jacobian.
    pub fd_step: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            fd_step: 1e-6,
            tolerance: 1e-10,
            max_iterations: 50,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub point: PhasePoint,
    /// Euclidean norm of `map(x) − x` with the `q` difference wrapped.
    pub residual: f64,
    /// Row-major `[[∂Q/∂q, ∂Q/∂p], [∂P/∂q, ∂P/∂p]]`.
    pub monodromy: [[f64; 2]; 2],
    pub stable: bool,
    pub iterations: usize,
}

impl FixedPoint {
    pub fn trace(&self) -> f64 {
        self.monodromy[0][0] + self.monodromy[1][1]
    }

    pub fn det(&self) -> f64 {
        let m = self.monodromy;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Squeeze ξ of the Gaussian whose covariance ellipse is invariant under
    /// the linearized map. `None` when the point is not elliptic.
    pub fn matched_xi(&self) -> Option<f64> {
        let m = self.monodromy;
        let c = 0.5 * self.trace();
        if !(c.abs() < 1.0) {
            return None;
        }
        let s = (1.0 - c * c).sqrt();
        // M = cos μ I + sin μ A with A = [[α, β], [−γ, −α]]
        let beta = m[0][1] / s;
        let gamma = -m[1][0] / s;
        let r = gamma / beta;
        (r > 0.0).then(|| r.sqrt())
    }
}

fn residual_vec(x: PhasePoint, y: PhasePoint) -> [f64; 2] {
    [wrap_angle(y.q - x.q), y.p - x.p]
}

/// Central-difference Jacobian of `map` at `x`.
pub fn monodromy<M>(map: &M, x: PhasePoint, h: f64) -> Result<[[f64; 2]; 2]>
where
    M: Fn(PhasePoint) -> Result<PhasePoint>,
{
    let qp = map(PhasePoint::new(x.q + h, x.p))?;
    let qm = map(PhasePoint::new(x.q - h, x.p))?;
    let pp = map(PhasePoint::new(x.q, x.p + h))?;
    let pm = map(PhasePoint::new(x.q, x.p - h))?;
    let d = 2.0 * h;
    Ok([
        [(qp.q - qm.q) / d, (pp.q - pm.q) / d],
        [(qp.p - qm.p) / d, (pp.p - pm.p) / d],
    ])
}

/// Newton iteration on `G(x) = map(x) − x`.
pub fn find_fixed_point<M>(map: M, guess: PhasePoint, opts: NewtonOptions) -> Result<FixedPoint>
where
    M: Fn(PhasePoint) -> Result<PhasePoint>,
{
    let mut x = guess;
    let mut g = residual_vec(x, map(x)?);
    let mut res = g[0].hypot(g[1]);
    let mut it = 0;
    while res >= opts.tolerance {
        if it == opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: res,
            });
        }
        let m = monodromy(&map, x, opts.fd_step)?;
        let j = [[m[0][0] - 1.0, m[0][1]], [m[1][0], m[1][1] - 1.0]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-12 {
            return Err(Error::SingularJacobian { det });
        }
        let dq = (j[1][1] * g[0] - j[0][1] * g[1]) / det;
        let dp = (-j[1][0] * g[0] + j[0][0] * g[1]) / det;
        x = PhasePoint::new(x.q - dq, x.p - dp);
        if !x.is_finite() {
            return Err(Error::NoConvergence {
                iterations: it + 1,
                residual: f64::INFINITY,
            });
        }
        g = residual_vec(x, map(x)?);
        res = g[0].hypot(g[1]);
        it += 1;
    }
    let monodromy = monodromy(&map, x, opts.fd_step)?;
    let trace = monodromy[0][0] + monodromy[1][1];
    Ok(FixedPoint {
        point: PhasePoint::new(wrap_angle(x.q), x.p),
        residual: res,
        monodromy,
        stable: trace.abs() < 2.0,
        iterations: it,
    })
}

/// Period-one fixed point of the stroboscopic map taken at the snapshot
/// phase of `params`.
pub fn find_period1_fixed_point(guess: PhasePoint, params: &Params) -> Result<FixedPoint> {
    find_period1_fixed_point_with(params, guess, params.snapshot_phase(), Integrator::default(), NewtonOptions::default())
}

pub fn find_period1_fixed_point_with<F: ForceField + ?Sized>(
    field: &F,
    guess: PhasePoint,
    t0: f64,
    integ: Integrator,
    opts: NewtonOptions,
) -> Result<FixedPoint> {
    find_fixed_point(|x| stroboscopic_map_with(field, x, t0, integ), guess, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_stable() {
        let fp = find_period1_fixed_point(PhasePoint::ORIGIN, &Params::standard()).unwrap();
        assert_eq!(fp.point, PhasePoint::ORIGIN);
        assert!(fp.stable);
        assert!((fp.det() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn linear_map_fixed_point() {
        let fp = find_fixed_point(
            |x| Ok(PhasePoint::new(0.5 * x.q + 0.1, 0.5 * x.p + 0.2)),
            PhasePoint::new(1.0, 1.0),
            NewtonOptions::default(),
        )
        .unwrap();
        assert!((fp.point.q - 0.2).abs() < 1e-10);
        assert!((fp.point.p - 0.4).abs() < 1e-10);
    }

    #[test]
    fn identity_map_is_singular() {
        let r = find_fixed_point(|x| Ok(PhasePoint::new(x.q, x.p + 1.0)), PhasePoint::ORIGIN, NewtonOptions::default());
        assert!(matches!(r, Err(Error::SingularJacobian { .. })));
    }
}
