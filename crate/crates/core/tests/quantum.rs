use num_complex::Complex64;
use proptest::prelude::*;
use slowmo::classical::PERIOD;
use slowmo::quantum::*;
use slowmo::*;

fn free(kbar: f64) -> Params {
    // κ = 0 is outside the validated model but exercises the kinetic factor alone
    Params {
        kappa: 0.0,
        epsilon: 0.0,
        kbar,
        modulation: Modulation::Unmodulated,
        spont: SpontaneousSettings::OFF,
    }
}

#[test]
fn free_step_is_exact() {
    let kbar = 0.25;
    let psi = init_packet(GaussianPacket::new(0.2, 0.7, 1.3), build_grid(512, 4).unwrap(), kbar).unwrap();
    let dt = 0.37;
    let stepped = split_step(&psi, 0.0, dt, &free(kbar)).unwrap();
    let phi = psi.momentum_representation();
    let evolved: Vec<Complex64> = phi
        .p
        .iter()
        .zip(&phi.amps)
        .map(|(p, a)| a * Complex64::from_polar(1.0, -p * p * dt / (2.0 * kbar)))
        .collect();
    let exact = WaveFunction::from_momentum(*psi.grid(), kbar, &evolved).unwrap();
    assert!(stepped.max_abs_diff(&exact) < 1e-12);
}

#[test]
fn free_dispersion_follows_analytic_law() {
    let kbar = 0.25;
    let pk = GaussianPacket::new(0.0, 0.0, 1.0);
    let psi0 = init_packet(pk, build_grid(2048, 16).unwrap(), kbar).unwrap();
    let mut op = SplitOperator::new(*psi0.grid(), &free(kbar)).unwrap();
    let mut psi = psi0.clone();
    let mut t = 0.0;
    for target in [0.5, 1.0, 2.0, PERIOD] {
        op.advance(&mut psi, t, target, 256).unwrap();
        t = target;
        let expect = kbar / (2.0 * pk.xi) + kbar * pk.xi / 2.0 * t * t;
        let got = psi.moments().var_q;
        assert!((got - expect).abs() < 1e-8, "t = {t}: {got} vs {expect}");
    }
}

#[test]
fn small_oscillation_frequency() {
    let kbar = 0.02;
    let params = Params::new(1.2, 0.0, kbar, Modulation::Cos).unwrap();
    let psi0 = init_packet(GaussianPacket::new(0.1, 0.0, 1.2f64.sqrt()), build_grid(1024, 1).unwrap(), kbar).unwrap();
    let mut op = SplitOperator::new(*psi0.grid(), &params).unwrap();
    let mut psi = psi0;
    let dt = PERIOD / 512.0;
    let mut crossings = Vec::new();
    let mut prev = psi.moments().mean_q;
    for i in 0..3000 {
        let t = i as f64 * dt;
        op.step(&mut psi, t, dt).unwrap();
        let q = psi.moments().mean_q;
        if prev > 0.0 && q <= 0.0 || prev < 0.0 && q >= 0.0 {
            crossings.push(t + dt * prev / (prev - q));
        }
        prev = q;
    }
    let n = crossings.len();
    assert!(n >= 8);
    let half_period = (crossings[n - 1] - crossings[0]) / (n - 1) as f64;
    let omega = std::f64::consts::PI / half_period;
    assert!((omega / 1.2f64.sqrt() - 1.0).abs() < 0.01, "{omega}");
}

#[test]
fn strang_step_is_second_order() {
    let params = Params::standard().with_epsilon(0.0);
    let psi0 = init_packet(GaussianPacket::new(0.5, 0.3, 1.0), build_grid(256, 2).unwrap(), 0.25).unwrap();
    let run = |steps: usize| {
        let mut op = SplitOperator::new(*psi0.grid(), &params).unwrap();
        let mut psi = psi0.clone();
        op.advance(&mut psi, 0.0, 3.0, steps).unwrap();
        psi
    };
    let reference = run(1 << 14);
    let e1 = run(256).max_abs_diff(&reference);
    let e2 = run(512).max_abs_diff(&reference);
    assert!((e1 / e2 - 4.0).abs() < 0.3, "{}", e1 / e2);

    // local error of one step against two half steps is third order
    let local = |dt: f64| {
        let one = split_step(&psi0, 0.0, dt, &params).unwrap();
        let two = split_step(&split_step(&psi0, 0.0, 0.5 * dt, &params).unwrap(), 0.5 * dt, 0.5 * dt, &params).unwrap();
        one.max_abs_diff(&two)
    };
    let ratio = local(0.02) / local(0.01);
    assert!((ratio - 8.0).abs() < 0.8, "{ratio}");
}

#[test]
fn snapshots_follow_the_modulation_phase() {
    let params = Params::standard().with_modulation(Modulation::Sin);
    let psi0 = init_packet(GaussianPacket::new(0.0, 1.0, 1.0), build_grid(256, 2).unwrap(), 0.25).unwrap();
    let ev = evolve_cycles(&psi0, 3, &params, QuantumOptions::unvalidated(256)).unwrap();
    assert_eq!(ev.series.cycles, vec![0, 1, 2, 3]);
    for (s, t) in ev.series.times.iter().enumerate() {
        assert!((t - (std::f64::consts::FRAC_PI_2 + s as f64 * PERIOD)).abs() < 1e-12);
    }
    assert!((ev.series.mean_p[0] - 1.0).abs() < 1e-8);
    assert!(ev.series.var_p.iter().all(|v| *v >= 0.0));
}

#[test]
fn norm_is_kept_over_a_hundred_cycles() {
    let params = Params::standard();
    let psi0 = init_packet(GaussianPacket::new(0.0, 1.0, 1.0), build_grid(256, 2).unwrap(), 0.25).unwrap();
    let ev = evolve_cycles(&psi0, 100, &params, QuantumOptions::unvalidated(512)).unwrap();
    assert!((ev.final_state().norm() - 1.0).abs() < 1e-10);
}

#[test]
fn energy_is_conserved_without_drive() {
    let params = Params::standard().with_epsilon(0.0);
    let psi0 = init_packet(GaussianPacket::new(0.5, 0.2, 1.0), build_grid(128, 1).unwrap(), 0.25).unwrap();
    let e0 = energy(&psi0, 0.0, &params);
    let ev = evolve_cycles(&psi0, 100, &params, QuantumOptions::unvalidated(16384)).unwrap();
    let e1 = energy(ev.final_state(), 100.0 * PERIOD, &params);
    assert!(((e1 - e0) / e0).abs() < 1e-8, "{}", (e1 - e0) / e0);
}

#[test]
fn parity_covariance() {
    let params = Params::standard();
    let psi0 = init_packet(GaussianPacket::new(0.3, 0.9, 1.0), build_grid(512, 2).unwrap(), 0.25).unwrap();
    let opts = QuantumOptions {
        keep_states: true,
        ..QuantumOptions::unvalidated(512)
    };
    let a = evolve_cycles(&psi0, 4, &params, opts).unwrap();
    let b = evolve_cycles(&psi0.reflected(), 4, &params, opts).unwrap();
    for (x, y) in a.states.iter().zip(&b.states) {
        assert!(x.reflected().max_abs_diff(y) < 1e-10);
    }
}

#[test]
fn resolved_grid_is_independent_of_size() {
    let params = Params::standard();
    let pk = GaussianPacket::new(0.0, 1.0, 1.0);
    let run = |n| {
        let psi = init_packet(pk, build_grid(n, 4).unwrap(), 0.25).unwrap();
        evolve_cycles(&psi, 3, &params, QuantumOptions::unvalidated(512)).unwrap().series
    };
    let (a, b) = (run(512), run(1024));
    for (x, y) in a.mean_p.iter().zip(&b.mean_p) {
        assert!((x - y).abs() < 1e-8);
    }
}

#[test]
fn band_edge_is_enforced() {
    let params = Params::standard();
    let g = build_grid(64, 4).unwrap();
    let mut phi = vec![Complex64::default(); 64];
    phi[32] = Complex64::new(1.0, 0.0);
    phi[1] = Complex64::new(0.1, 0.0);
    let psi = WaveFunction::from_momentum(g, 0.25, &phi).unwrap();
    assert!(matches!(split_step(&psi, 0.0, 0.01, &params), Err(Error::BandEdge { .. })));
    phi[1] = Complex64::default();
    let psi = WaveFunction::from_momentum(g, 0.25, &phi).unwrap();
    assert!(split_step(&psi, 0.0, 0.01, &params).is_ok());
}

#[test]
fn validation_reports_the_doubling() {
    let params = Params::standard();
    let psi0 = init_packet(GaussianPacket::new(0.0, 1.0, 1.0), build_grid(256, 2).unwrap(), 0.25).unwrap();
    let opts = QuantumOptions {
        validation: Validation::Check,
        ..QuantumOptions::unvalidated(1024)
    };
    let ev = evolve_cycles(&psi0, 2, &params, opts).unwrap();
    let report = ev.validation.unwrap();
    assert!(report.change() < VALIDATION_TOLERANCE);
    assert!(evolve_cycles(&psi0, 2, &params, QuantumOptions::unvalidated(128)).is_err());
}

#[test]
fn semiclassical_packet_stays_on_the_resonance() {
    let deviation = |kbar: f64, n: usize| {
        let params = Params::standard().with_kbar(kbar);
        let run = tunneling_series(
            StartRule::Classical,
            PhasePoint::new(0.0, 1.0),
            3,
            &params,
            XiChoice::Fixed(1.0),
            build_grid(n, 4).unwrap(),
            QuantumOptions::unvalidated(1024),
        )
        .unwrap();
        let fp = find_period1_fixed_point(PhasePoint::new(0.0, 1.0), &params).unwrap();
        assert_eq!(run.fixed_point.point, fp.point);
        run.series.mean_p.iter().map(|p| (p - fp.point.p).abs()).fold(0.0, f64::max)
    };
    let coarse = deviation(0.05, 1024);
    let fine = deviation(0.01, 2048);
    assert!(fine < 0.5 * coarse, "{fine} vs {coarse}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn steps_are_unitary(dt in 1e-3f64..0.5, t in 0.0f64..10.0, q0 in -2.0f64..2.0, p0 in -1.5f64..1.5) {
        let psi = init_packet(GaussianPacket::new(q0, p0, 1.0), build_grid(256, 2).unwrap(), 0.25).unwrap();
        let out = split_step(&psi, t, dt, &Params::standard()).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }
}
