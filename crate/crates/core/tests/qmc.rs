use proptest::prelude::*;
use slowmo::qmc::*;
use slowmo::quantum::{evolve_cycles, QuantumOptions};
use slowmo::*;

fn grid() -> SpatialGrid {
    build_grid(256, 2).unwrap()
}

fn noisy(rate: f64) -> Params {
    Params::standard().with_spont(SpontaneousSettings::new(rate, RecoilModel::Dipole, true).unwrap())
}

#[test]
fn jump_counts_are_poissonian() {
    let st = SpontaneousSettings::new(0.5, RecoilModel::Uniform, false).unwrap();
    let n = 10_000;
    let counts: Vec<f64> = (0..n)
        .map(|i| {
            let mut rng = stream_rng(21, Purpose::QuantumJumps, i);
            draw_jump_schedule(0.0, 20.0, &st, 0.25, &mut rng).unwrap().len() as f64
        })
        .collect();
    let mean = counts.iter().sum::<f64>() / n as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    assert!((mean - 10.0).abs() < 0.3, "{mean}");
    assert!((var / mean - 1.0).abs() < 0.1, "{var}");
}

#[test]
fn dipole_recoil_moments() {
    let mut rng = stream_rng(5, Purpose::QuantumJumps, 0);
    let n = 1_000_000;
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let u = sample_recoil(RecoilModel::Dipole, &mut rng);
        assert!(u.abs() <= 1.0);
        s1 += u;
        s2 += u * u;
    }
    let nf = n as f64;
    // Var u = 2/5 and Var u² = 9/35 − 4/25 under the density 3/8 (1 + u²)
    assert!((s1 / nf).abs() < 4.0 * (0.4 / nf).sqrt());
    let var_u2: f64 = 9.0 / 35.0 - 0.16;
    assert!((s2 / nf - 0.4).abs() < 4.0 * (var_u2 / nf).sqrt(), "{}", s2 / nf);
}

#[test]
fn recoil_shifts_momentum_by_comb_multiples() {
    let psi = init_packet(GaussianPacket::new(0.0, 0.3, 1.0), grid(), 0.25).unwrap();
    let comb = grid().dp(0.25);
    assert_eq!(apply_recoil(&psi, 0.0).unwrap(), psi);
    let a = apply_recoil(&psi, 3.0 * comb).unwrap();
    assert!((a.moments().mean_p - psi.moments().mean_p - 3.0 * comb).abs() < 1e-12);
    let ab = apply_recoil(&a, -5.0 * comb).unwrap();
    let direct = apply_recoil(&psi, -2.0 * comb).unwrap();
    assert!(ab.max_abs_diff(&direct) < 1e-12);
    let rounded = apply_recoil(&psi, 1.4 * comb).unwrap();
    assert!(rounded.max_abs_diff(&apply_recoil(&psi, comb).unwrap()) < 1e-15);
    assert!((rounded.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn trajectories_are_reproducible() {
    let psi = init_packet(GaussianPacket::new(0.0, 0.5, 1.0), grid(), 0.25).unwrap();
    let params = noisy(0.5);
    let window = TimeWindow::cycles(&params, 3);
    let a = run_quantum_trajectory(&psi, window, &params, 256, 8, 2).unwrap();
    let b = run_quantum_trajectory(&psi, window, &params, 256, 8, 2).unwrap();
    let c = run_quantum_trajectory(&psi, window, &params, 256, 8, 3).unwrap();
    assert!(!a.jumps.is_empty());
    assert_eq!(a.jumps, b.jumps);
    assert_eq!(a.final_state, b.final_state);
    assert_ne!(a.jumps, c.jumps);
}

#[test]
fn silent_trajectory_is_unitary_evolution() {
    let psi = init_packet(GaussianPacket::new(0.2, 0.8, 1.0), grid(), 0.25).unwrap();
    let params = Params::standard();
    let r = run_quantum_trajectory(&psi, TimeWindow::cycles(&params, 4), &params, 512, 1, 0).unwrap();
    let ev = evolve_cycles(&psi, 4, &params, QuantumOptions::unvalidated(512)).unwrap();
    assert!(r.jumps.is_empty());
    assert_eq!(r.series.cycles, ev.series.cycles);
    for (x, y) in r.series.mean_p.iter().zip(&ev.series.mean_p) {
        assert!((x - y).abs() < 1e-12);
    }
    assert!(r.final_state.max_abs_diff(ev.final_state()) < 1e-12);
}

#[test]
fn single_packet_ensemble_reduces_to_one_state() {
    let params = Params::standard();
    let pk = GaussianPacket::new(0.0, 1.0, 1.0);
    let edges = uniform_edges(-3.0, 3.0, 96).unwrap();
    let d = ensemble_distribution(&[pk], grid(), TimeWindow::cycles(&params, 2), &params, 512, 0, edges.clone())
        .unwrap();
    let ev = evolve_cycles(&init_packet(pk, grid(), 0.25).unwrap(), 2, &params, QuantumOptions::unvalidated(512))
        .unwrap();
    let h = MomentumHistogram::from_momentum(&ev.final_state().momentum_representation(), edges).unwrap();
    for (a, b) in d.histogram.masses().iter().zip(h.masses()) {
        assert!((a - b).abs() < 1e-12);
    }
    assert_eq!(d.total_jumps, 0);
}

#[test]
fn mirrored_ensemble_is_symmetric() {
    let params = Params::standard();
    let packets = [
        GaussianPacket::new(0.3, 0.9, 1.0),
        GaussianPacket::new(-0.3, -0.9, 1.0),
        GaussianPacket::new(1.0, -0.2, 1.0),
        GaussianPacket::new(-1.0, 0.2, 1.0),
    ];
    let d = ensemble_distribution(
        &packets,
        grid(),
        TimeWindow::cycles(&params, 3),
        &params,
        512,
        0,
        uniform_edges(-3.0, 3.0, 60).unwrap(),
    )
    .unwrap();
    let m = d.histogram.masses();
    for i in 0..m.len() {
        assert!((m[i] - m[m.len() - 1 - i]).abs() < 1e-10);
    }
}

#[test]
fn recoils_heat_the_ensemble() {
    let packets = vec![GaussianPacket::new(0.0, 0.0, 1.0); 200];
    let run = |params: &Params| {
        ensemble_distribution(
            &packets,
            grid(),
            TimeWindow::cycles(params, 4),
            params,
            256,
            3,
            uniform_edges(-6.0, 6.0, 96).unwrap(),
        )
        .unwrap()
    };
    let quiet = run(&Params::standard());
    let hot = run(&noisy(0.3));
    let last = |d: &EnsembleDistribution| *d.series.var_p.last().unwrap();
    assert!(hot.total_jumps > 0);
    assert!(last(&hot) > last(&quiet) + 0.1, "{} vs {}", last(&hot), last(&quiet));
    assert!(hot.failures.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn schedules_stay_inside_their_window(seed in any::<u64>(), t0 in 0.0f64..10.0, len in 0.1f64..30.0, rate in 0.01f64..2.0) {
        let st = SpontaneousSettings::new(rate, RecoilModel::Dipole, true).unwrap();
        let mut rng = stream_rng(seed, Purpose::QuantumJumps, 0);
        let s = draw_jump_schedule(t0, t0 + len, &st, 0.25, &mut rng).unwrap();
        prop_assert!(s.times.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(s.times.iter().all(|&t| t > t0 && t < t0 + len));
        prop_assert!(s.kicks.iter().all(|k| k.abs() <= 0.5));
    }
}
