use std::f64::consts::PI;

use proptest::prelude::*;
use slowmo::classical::{stroboscopic_map_with, EnsembleOptions, Scheme, PERIOD};
use slowmo::moyal::*;
use slowmo::*;

const Q_RANGE: (f64, f64) = (-PI, PI);

fn gaussian_state(pk: GaussianPacket, kbar: f64, nq: usize, np: usize) -> WignerGridState {
    WignerGridState::gaussian(pk, kbar, nq, np, Q_RANGE, (pk.p0 - 5.0, pk.p0 + 5.0)).unwrap()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn factor_examples() {
    let c = EffectiveContext::new(0.84, 1.0, 0.25).unwrap();
    assert!((veff_factor(0.84, &c) - 0.9394131).abs() < 1e-7);
    let tiny = EffectiveContext::new(0.84, 1.0, 1e-12).unwrap();
    assert!((veff_factor(0.84, &tiny) - 1.0).abs() < 1e-12);
    // the series branch joins the closed form continuously
    let x = 1e-8;
    assert!((sinhc(x) - (1.0 + x * x / 6.0)).abs() < 1e-15);
    assert!((sinhc(1e-4 - 1e-13) - sinhc(1e-4 + 1e-13)).abs() < 1e-15);
}

#[test]
fn effective_force_examples() {
    let params = Params::standard();
    let c = EffectiveContext::new(0.9, 1.0, 0.25).unwrap();
    for p in [-1.0, 0.0, 2.0] {
        assert_eq!(effective_force(0.0, p, 1.3, &params, &c), 0.0);
    }
    let f = potential_and_force(0.8, 0.4, &params).1;
    assert!((effective_force(0.8, 0.9, 0.4, &params, &c) - f * (-0.0625f64).exp()).abs() < 1e-15);
    let c35 = EffectiveContext::new(0.9, 1.0, 0.35).unwrap();
    assert!(veff_factor(0.9, &c35) < veff_factor(0.9, &c));
}

#[test]
fn order_one_series_is_classical_liouville() {
    let params = Params::standard();
    let w = gaussian_state(GaussianPacket::new(0.3, 0.8, 1.0), 0.25, 128, 128);
    for t in [0.0, 1.1] {
        let a = moyal_series_rhs(&w, t, &params, 1).unwrap();
        let b = classical_liouville_rhs(&w, t, &params).unwrap();
        assert!(max_diff(a.values(), b.values()) < 1e-10);
    }
}

#[test]
fn series_is_converged_at_order_fifteen() {
    let params = Params::standard();
    let w = gaussian_state(GaussianPacket::new(0.3, 0.8, 1.0), 0.25, 128, 256);
    let a = moyal_series_rhs(&w, 0.5, &params, 15).unwrap();
    let b = moyal_series_rhs(&w, 0.5, &params, 13).unwrap();
    let change = max_diff(a.values(), b.values()) / max_abs(a.values());
    assert!(change < 1e-8, "{change}");
}

#[test]
fn shift_form_matches_series() {
    let params = Params::standard();
    for (pk, kbar) in [(GaussianPacket::new(0.3, 0.8, 1.0), 0.25), (GaussianPacket::new(-0.5, -0.2, 1.7), 0.35)] {
        let w = gaussian_state(pk, kbar, 128, 256);
        let params = params.with_kbar(kbar);
        let series = moyal_series_rhs(&w, 0.7, &params, 15).unwrap();
        let shift = moyal_shift_rhs(&w, 0.7, &params, ShiftMode::Spectral).unwrap();
        let rel = max_diff(series.values(), shift.values()) / max_abs(series.values());
        assert!(rel < 1e-6, "{rel}");
    }
}

#[test]
fn lattice_shift_matches_spectral_shift() {
    let params = Params::standard();
    let kbar = 0.25;
    // p spacing 10/256 does not divide k̄/2; 8/256 does
    let pk = GaussianPacket::new(0.0, 0.5, 1.0);
    let w = WignerGridState::gaussian(pk, kbar, 64, 256, Q_RANGE, (-3.5, 4.5)).unwrap();
    let a = moyal_shift_rhs(&w, 0.2, &params, ShiftMode::Grid).unwrap();
    let b = moyal_shift_rhs(&w, 0.2, &params, ShiftMode::Spectral).unwrap();
    assert!(max_diff(a.values(), b.values()) / max_abs(a.values()) < 1e-10);
    let bad = gaussian_state(pk, kbar, 64, 256);
    assert!(matches!(
        moyal_shift_rhs(&bad, 0.2, &params, ShiftMode::Grid),
        Err(Error::ShiftIncompatible { .. })
    ));
}

#[test]
fn shift_form_reduces_to_liouville() {
    let pk = GaussianPacket::new(0.2, 0.6, 1.0);
    let mut prev = f64::INFINITY;
    for kbar in [0.2, 0.1, 0.05] {
        let params = Params::standard().with_kbar(kbar);
        // same packet shape for every k̄
        let w = WignerGridState::from_fn(128, 256, Q_RANGE, (-4.4, 5.6), |q, p| {
            (-(q - pk.q0).powi(2) / 0.25 - (p - pk.p0).powi(2) / 0.25).exp()
        })
        .unwrap();
        let shift = moyal_shift_rhs(&w, 0.3, &params, ShiftMode::Spectral).unwrap();
        let classical = classical_liouville_rhs(&w, 0.3, &params).unwrap();
        let d = max_diff(shift.values(), classical.values());
        // leading correction is O(k̄²)
        assert!(d < prev / 3.5, "{kbar}: {d} vs {prev}");
        prev = d;
    }
}

/// The quantum correction divided by `∂W/∂p` must be the gradient of the
/// compressed potential.
#[test]
fn quotient_reproduces_effective_gradient() {
    let params = Params::standard();
    for (pk, kbar) in [(GaussianPacket::new(0.1, 0.84, 1.0), 0.25), (GaussianPacket::new(0.0, 1.0, 1.4), 0.3)] {
        let params = params.with_kbar(kbar);
        let t = 0.9;
        let w = gaussian_state(pk, kbar, 128, 256);
        let rhs = moyal_shift_rhs(&w, t, &params, ShiftMode::Spectral).unwrap();
        let stream = streaming_term(&w);
        let dwdp = w.p_derivative(1);
        let top = max_abs(&dwdp);
        let ctx = EffectiveContext::new(pk.p0, pk.xi, kbar).unwrap();
        let np = w.p().len();
        let mut worst: f64 = 0.0;
        let mut checked = 0;
        for (iq, &q) in w.q().iter().enumerate() {
            let dv = -potential_and_force(q, t, &params).1;
            if dv.abs() < 0.1 {
                continue;
            }
            for (ip, &p) in w.p().iter().enumerate() {
                let i = iq * np + ip;
                if dwdp[i].abs() < 1e-2 * top {
                    continue;
                }
                let quotient = (rhs.values()[i] - stream.values()[i]) / dwdp[i];
                let x = (p - pk.p0) / pk.xi;
                let oracle = dv * (-kbar / (4.0 * pk.xi)).exp() * x.sinh() / x;
                worst = worst.max((quotient - oracle).abs() / oracle.abs());
                assert!((veff_factor(p, &ctx) * dv - oracle).abs() < 1e-12 * oracle.abs());
                checked += 1;
            }
        }
        assert!(checked > 100);
        assert!(worst < 1e-6, "{worst}");
    }
}

#[test]
fn modified_map_tends_to_original_map() {
    let params = Params::standard();
    let fp = find_period1_fixed_point(PhasePoint::new(0.0, 1.0), &params).unwrap();
    let t0 = params.snapshot_phase();
    let orbit = ReferenceOrbit::sample(&params, fp.point, t0, Integrator::default()).unwrap();
    let mean = MeanMomentum::Tracking(std::sync::Arc::new(orbit));
    let mut last = f64::INFINITY;
    for kbar in [1e-2, 1e-3, 1e-4] {
        let dyn_ = EffectiveDynamics::new(&params.with_kbar(kbar), 1.0, mean.clone()).unwrap();
        let y = modified_stroboscopic_map(fp.point, 0, &dyn_).unwrap();
        let d = (y.q - fp.point.q).abs() + (y.p - fp.point.p).abs();
        assert!(d < 0.2 * last, "{kbar}: {d}");
        last = d;
    }
    assert!(last < 1e-3, "{last}");
}

#[test]
fn modified_resonances() {
    let params = Params::standard();
    let classical = find_period1_fixed_point(PhasePoint::new(0.0, 1.0), &params).unwrap();
    let near_classical = find_modified_resonance(PhasePoint::new(0.0, 1.0), &params, 0.01, 1.0).unwrap();
    assert!((near_classical.fixed.point.p - classical.point.p).abs() < 0.02);
    let mut last = f64::INFINITY;
    for kbar in [0.15, 0.2, 0.25, 0.3, 0.35] {
        let r = find_modified_resonance(PhasePoint::new(0.0, 1.0), &params, kbar, 1.0).unwrap();
        assert!(r.fixed.point.p < last, "{kbar}: {} !< {last}", r.fixed.point.p);
        assert!(r.fixed.point.p < classical.point.p);
        assert!(r.fixed.stable);
        assert!((r.context.p_mean - r.fixed.point.p).abs() < 1e-12);
        last = r.fixed.point.p;
    }
}

#[test]
fn modified_ensemble_reductions() {
    let params = Params::standard();
    let ens = ClassicalEnsemble::cloud(300, (-PI, PI), 0.0, 0.5, 2).unwrap();
    let opts = EnsembleOptions {
        integrator: Integrator::new(Scheme::Yoshida4, 128).unwrap(),
        ..Default::default()
    };
    let times = [PERIOD, 2.0 * PERIOD];
    let plain = slowmo::classical::evolve_classical_ensemble(&ens, 0.0, &times, &params, &opts).unwrap();
    let (empty, classes) =
        evolve_modified_ensemble(&ens, 0.0, &times, &params, &ResonanceRegion::empty(), &[], &opts).unwrap();
    assert_eq!(plain, empty);
    assert!(classes.iter().all(Option::is_none));

    // no drive: no resonance, nobody is reclassified
    let flat = params.with_epsilon(0.0);
    let dyn_ = EffectiveDynamics::new(&flat, 1.0, MeanMomentum::Fixed(1.0)).unwrap();
    let region = ResonanceRegion::new(vec![PhasePoint::new(0.0, 1.0)]);
    let (snaps, classes) = evolve_modified_ensemble(&ens, 0.0, &times, &flat, &region, &[dyn_], &opts).unwrap();
    assert!(classes.iter().all(Option::is_none));
    let plain = slowmo::classical::evolve_classical_ensemble(&ens, 0.0, &times, &flat, &opts).unwrap();
    assert_eq!(plain, snaps);
}

#[test]
fn side_island_particles_are_slowed() {
    let params = Params::standard();
    let r = find_modified_resonance(PhasePoint::new(0.0, 1.0), &params, 0.25, 1.0).unwrap();
    let centre = r.classical.point;
    let ens = ClassicalEnsemble::new(vec![centre]).unwrap();
    let opts = EnsembleOptions::default();
    let region = ResonanceRegion::new(vec![centre]);
    let t1 = params.snapshot_phase() + PERIOD;
    let (snaps, classes) =
        evolve_modified_ensemble(&ens, params.snapshot_phase(), &[t1], &params, &region, &[r.dynamics.clone()], &opts)
            .unwrap();
    assert_eq!(classes, vec![Some(0)]);
    let classical = stroboscopic_map_with(&params, centre, params.snapshot_phase(), opts.integrator).unwrap();
    assert!((snaps.states[0][0].p - classical.p).abs() > 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factor_bounds_and_evenness(d in -4.0f64..4.0, pm in -2.0f64..2.0, xi in 0.2f64..3.0, kbar in 0.01f64..1.0) {
        let c = EffectiveContext::new(pm, xi, kbar).unwrap();
        let floor = (-kbar / (4.0 * xi)).exp();
        prop_assert!(veff_factor(pm + d, &c) >= floor * (1.0 - 1e-15));
        prop_assert_eq!(veff_factor(pm, &c), floor);
        let a = veff_factor(pm + d, &c);
        let b = veff_factor(pm - d, &c);
        prop_assert!((a - b).abs() <= 1e-14 * a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn series_preserves_parity_class(q0 in 0.1f64..0.5, p0 in 0.3f64..1.2) {
        let params = Params::standard();
        let kbar = 0.25;
        let (a, b) = (GaussianPacket::new(q0, p0, 1.0), GaussianPacket::new(-q0, -p0, 1.0));
        let w = WignerGridState::from_fn(128, 128, Q_RANGE, (-5.0, 5.0), |q, p| a.wigner(q, p, kbar) - b.wigner(q, p, kbar))
            .unwrap();
        let rhs = moyal_series_rhs(&w, 0.0, &params, 7).unwrap();
        let (nq, np) = (w.q().len(), w.p().len());
        let scale = max_abs(rhs.values());
        for iq in 1..nq {
            for ip in 1..np {
                let mirror = rhs.at(nq - iq, np - ip);
                prop_assert!((rhs.at(iq, ip) + mirror).abs() < 1e-9 * scale);
            }
        }
    }
}
