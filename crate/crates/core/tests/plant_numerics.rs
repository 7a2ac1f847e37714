use mfc_core::plants::{
    energy, generate_desired_trajectory, propagate, rk4_step, BumpNoise, NoiseModel, PendulumParams, PendulumState,
};

type P = PendulumParams<f64>;
type S = PendulumState<f64>;

fn max_diff(a: &S, b: &S) -> f64 {
    [a.x - b.x, a.theta - b.theta, a.x_dot - b.x_dot, a.theta_dot - b.theta_dot]
        .iter()
        .fold(0.0, |m: f64, v| m.max(v.abs()))
}

#[test]
fn zero_state_stays_put() {
    let p = P::default();
    let z = S::new(0.0, 0.0, 0.0, 0.0);
    for dt in [1e-3, 0.02, 0.5] {
        assert_eq!(rk4_step(&z, 0.0, dt, &p).unwrap(), z);
    }
    assert!(rk4_step(&z, 0.0, 0.0, &p).is_err());
}

#[test]
fn step_halving_error_ratio_near_sixteen() {
    let p = P::default();
    let s0 = S::new(-0.2, 0.6, 0.4, -0.5);
    let run = |h: f64| {
        let steps = (1.0 / h).round() as usize;
        let mut s = s0;
        for _ in 0..steps {
            s = rk4_step(&s, -0.3, h, &p).unwrap();
        }
        s
    };
    let (a, b, c, d) = (run(0.1), run(0.05), run(0.025), run(0.0125));
    let r1 = max_diff(&a, &b) / max_diff(&b, &c);
    let r2 = max_diff(&b, &c) / max_diff(&c, &d);
    assert!((12.0..20.0).contains(&r1), "{r1}");
    assert!((14.0..18.0).contains(&r2), "{r2}");
}

#[test]
fn frictionless_energy_is_conserved() {
    let p = P::default().frictionless();
    let mut s = S::new(0.0, 0.5, 0.1, -0.2);
    let e0 = energy(&s, &p);
    for _ in 0..10 {
        s = propagate(&s, 0.0, 1.0, 1000, &p).unwrap();
        assert!((energy(&s, &p) - e0).abs() < 1e-8);
    }
}

#[test]
fn friction_never_adds_energy() {
    let p = P::default();
    let mut s = S::new(0.0, 0.2, 0.3, 0.1);
    let mut e = energy(&s, &p);
    for _ in 0..2000 {
        s = rk4_step(&s, 0.0, 0.02, &p).unwrap();
        let next = energy(&s, &p);
        assert!(next <= e + 1e-6, "{next} > {e}");
        e = next;
    }
}

#[test]
fn desired_trajectory_envelope_shrinks() {
    let p = P::default();
    let init = S::new(0.45, -0.14, -0.3, 0.05);
    let traj = generate_desired_trajectory(&p, &init, 70.0, 0.02, 10).unwrap();
    assert_eq!(traj.len(), 3501);
    assert_eq!(traj[0].theta, -0.14);
    // Peak |θ| over consecutive 10 s windows, each longer than one swing.
    let peaks: Vec<f64> = traj
        .chunks(500)
        .map(|w| w.iter().fold(0.0f64, |m, s| m.max(s.theta.abs())))
        .collect();
    for pair in peaks.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-12, "{peaks:?}");
    }
}

#[test]
fn bump_noise_is_bounded_symmetric_and_seeded() {
    let model = NoiseModel::new(0.018, 11).unwrap();
    let mut a = BumpNoise::<f64>::new(&model);
    let mut b = BumpNoise::<f64>::new(&model);
    let n = 200_000;
    let (mut pos, mut sum) = (0usize, 0.0);
    for _ in 0..n {
        let v = a.sample();
        assert_eq!(v, b.sample());
        assert!(v.abs() < 0.009);
        pos += usize::from(v > 0.0);
        sum += v;
    }
    let frac = pos as f64 / n as f64;
    assert!((frac - 0.5).abs() < 0.01, "{frac}");
    assert!((sum / n as f64).abs() < 1e-4);
}
