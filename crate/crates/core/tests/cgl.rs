use gw_commute::cgl::{
    decay_probe, mass_is_monotone, mollified_weight, mollified_weight_gradient, nonlinearity,
    step_duhamel, weighted_probe, CglConfig, CglSolver,
};
use gw_commute::semigroup::{
    apply_fourier, kernel, lp_norm, relative_l2_error, ComplexParam, GridFunction, GridShape,
};
use gw_commute::{Error, Exponent};
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

fn gaussian(shape: GridShape<f64>, sigma: f64, eps: f64) -> GridFunction<f64> {
    let g = ComplexParam::real(sigma).unwrap();
    GridFunction::from_fn(shape, |x| kernel(&g, x) * eps)
}

fn linear(t_end: f64) -> CglConfig<f64> {
    CglConfig {
        lambda: C::new(0.0, 0.0),
        t_end,
        sample_every: 0.5,
        ..CglConfig::default()
    }
}

#[test]
fn linear_flow_is_the_spreading_gaussian() {
    let shape = GridShape::new(1, 1024, 48.0).unwrap();
    let eps = 0.01;
    let u0 = gaussian(shape, 1.0, eps);
    let cfg = linear(10.0);
    let solver = CglSolver::new(cfg.clone(), &u0).unwrap();
    let one = solver.step(&u0, 1).unwrap();
    assert_eq!(one.samples(), apply_fourier(&u0, C::new(cfg.dt, 0.0)).unwrap().samples());

    let traj = solver.simulate(&u0).unwrap();
    let exact = gaussian(shape, 11.0, eps);
    assert!(relative_l2_error(traj.final_state(), &exact).unwrap() <= 1e-8);

    let probe = decay_probe(&traj, &[Exponent::one(), Exponent::Infinity]);
    assert!(probe.pass);
    let sup = eps / (4.0 * std::f64::consts::PI).sqrt();
    for rec in &probe.records {
        let want = if rec.r.is_infinite() { sup } else { eps };
        assert!((rec.value - want).abs() <= 1e-8 * want, "{rec:?}");
    }
}

#[test]
fn linear_weighted_growth_has_the_heat_rate() {
    let shape = GridShape::new(1, 1024, 64.0).unwrap();
    let u0 = gaussian(shape, 1.0, 0.01);
    let traj = CglSolver::new(linear(40.0), &u0).unwrap().simulate(&u0).unwrap();
    for m in 1..=2 {
        let w = weighted_probe(&traj, m, Exponent::one()).unwrap();
        assert!((w.slope - 0.5 * m as f64).abs() <= 0.1, "m={m} slope {}", w.slope);
        assert!(w.pass);
    }
}

fn run(cfg: &CglConfig<f64>, u0: &GridFunction<f64>) -> GridFunction<f64> {
    CglSolver::new(cfg.clone(), u0).unwrap().simulate(u0).unwrap().final_state().clone()
}

#[test]
fn integrator_is_second_order() {
    let shape = GridShape::new(1, 512, 32.0).unwrap();
    let u0 = gaussian(shape, 0.5, 2.0);
    let at = |dt: f64| {
        let cfg = CglConfig {
            nu: C::new(1.0, 0.5),
            lambda: C::new(-1.0, 0.3),
            dt,
            t_end: 1.0,
            sample_every: 1.0,
            smallness: 10.0,
            ..CglConfig::default()
        };
        run(&cfg, &u0)
    };
    let (a, b, c) = (at(0.1), at(0.05), at(0.025));
    let e1 = lp_norm(&a.try_sub(&b).unwrap(), Exponent::two());
    let e2 = lp_norm(&b.try_sub(&c).unwrap(), Exponent::two());
    let ratio = e1 / e2;
    assert!((ratio - 4.0).abs() <= 0.8, "ratio {ratio}");
}

#[test]
fn absorbing_flow_loses_mass() {
    let shape = GridShape::new(1, 1024, 96.0).unwrap();
    let u0 = gaussian(shape, 1.0, 0.01);
    let cfg = CglConfig { t_end: 20.0, ..CglConfig::default() };
    let traj = CglSolver::new(cfg, &u0).unwrap().simulate(&u0).unwrap();
    assert!(mass_is_monotone(&traj, 1e-12));
    assert!(traj.max_boundary_mass < 1e-10);
}

#[test]
fn refining_the_grid_leaves_probes_unchanged() {
    let probes = |points: usize| {
        let shape = GridShape::new(1, points, 96.0).unwrap();
        let u0 = gaussian(shape, 1.0, 0.01);
        let cfg = CglConfig { t_end: 25.0, ..CglConfig::default() };
        let traj = CglSolver::new(cfg, &u0).unwrap().simulate(&u0).unwrap();
        let mut smooth: Vec<f64> = decay_probe(&traj, &[Exponent::one(), Exponent::two(), Exponent::Infinity])
            .records
            .iter()
            .map(|r| r.value)
            .collect();
        smooth.extend(weighted_probe(&traj, 2, Exponent::one()).unwrap().records.iter().map(|r| r.w));
        // |x|u has a kink at the origin, so this one converges like h²
        let kinked: Vec<f64> = weighted_probe(&traj, 1, Exponent::one()).unwrap().records.iter().map(|r| r.w).collect();
        (smooth, kinked)
    };
    let (coarse, fine) = (probes(1024), probes(2048));
    assert_eq!(coarse.0.len(), fine.0.len());
    for (a, b) in coarse.0.iter().zip(&fine.0) {
        assert!((a - b).abs() <= 1e-4 * b.abs(), "{a} vs {b}");
    }
    let h = 192.0 / 1024.0;
    for (a, b) in coarse.1.iter().zip(&fine.1) {
        assert!((a - b).abs() <= 0.05 * h * h * b.abs(), "{a} vs {b}");
    }
}

#[test]
fn configuration_is_validated() {
    let shape = GridShape::new(1, 256, 32.0).unwrap();
    let u0 = gaussian(shape, 1.0, 0.01);
    let ok = CglConfig::<f64>::default();
    assert!(ok.validate(&u0).is_ok());
    let bad = [
        CglConfig { p: 3.0, ..ok.clone() },
        CglConfig { nu: C::new(0.0, 1.0), ..ok.clone() },
        CglConfig { dt: 0.0, ..ok.clone() },
        CglConfig { sample_every: 0.001, ..ok.clone() },
        CglConfig { smallness: 1e-3, ..ok.clone() },
    ];
    for cfg in bad {
        assert!(matches!(cfg.validate(&u0), Err(Error::InvalidParameter(_))), "{cfg:?}");
        assert!(CglSolver::new(cfg, &u0).is_err());
    }
    let shape2 = GridShape::new(2, 32, 8.0).unwrap();
    let v0 = gaussian(shape2, 1.0, 0.01);
    assert!(CglConfig { p: 2.0, ..ok.clone() }.validate(&v0).is_err());
    assert!(CglConfig { p: 2.5, ..ok }.validate(&v0).is_ok());
}

#[test]
fn focusing_growth_trips_the_guard() {
    let shape = GridShape::new(1, 512, 32.0).unwrap();
    let u0 = gaussian(shape, 1.0, 10.0);
    let cfg = CglConfig {
        lambda: C::new(1.0, 0.0),
        dt: 1e-3,
        t_end: 1.0,
        sample_every: 0.1,
        smallness: 1e3,
        ..CglConfig::default()
    };
    match CglSolver::new(cfg, &u0).unwrap().simulate(&u0) {
        Err(Error::BlowUp { sup, limit, .. }) => assert!(sup > limit),
        other => panic!("expected blow-up, got {:?}", other.map(|t| t.times.len())),
    }
}

#[test]
fn single_step_helper_matches_the_solver() {
    let shape = GridShape::new(1, 256, 32.0).unwrap();
    let u0 = gaussian(shape, 1.0, 0.01);
    let cfg = CglConfig::<f64>::default();
    let a = step_duhamel(&u0, &cfg).unwrap();
    let b = CglSolver::new(cfg.clone(), &u0).unwrap().step(&u0, 1).unwrap();
    assert_eq!(a.samples(), b.samples());
    assert!(step_duhamel(&u0, &CglConfig { nu: C::new(-1.0, 0.0), ..cfg }).is_err());
}

#[test]
fn mollified_coordinate_bounds() {
    let shape = GridShape::new(1, 8192, 32.0).unwrap();
    for eps in [0.01, 0.1, 1.0] {
        let eta = mollified_weight(shape, 0, eps).unwrap();
        let sup = eta.samples.max_abs();
        let want = 1.0 / (2.0 * eps * std::f64::consts::E).sqrt();
        // the peak has η''/η = −4ε, so a node within h/2 is off by at most εh²/2
        let h = shape.spacing();
        assert!(sup <= want * (1.0 + 1e-14), "ε={eps}: {sup} vs {want}");
        assert!(want - sup <= 0.5 * eps * h * h * want, "ε={eps}: {sup} vs {want}");
        assert_eq!(eta.gradient_bound, 2.0);
    }
    assert!(mollified_weight(shape, 1, 0.1).is_err());
    assert!(mollified_weight(shape, 0, 0.0).is_err());
}

proptest! {
    #[test]
    fn mollified_gradient_matches_differences(x in -5.0f64..5.0, y in -5.0f64..5.0, eps in 0.01f64..2.0, axis in 0usize..2) {
        let p = [x, y];
        let g = mollified_weight_gradient(&p, axis, eps);
        let eta = |q: [f64; 2]| q[axis] * (-eps * (q[0] * q[0] + q[1] * q[1])).exp();
        let h = 1e-6;
        for k in 0..2 {
            let (mut a, mut b) = (p, p);
            a[k] += h;
            b[k] -= h;
            let fd = (eta(a) - eta(b)) / (2.0 * h);
            prop_assert!((fd - g[k]).abs() <= 1e-7);
        }
        prop_assert!(g.iter().map(|v| v * v).sum::<f64>().sqrt() <= 2.0);
    }

    #[test]
    fn nonlinearity_is_gauge_covariant(re in -2.0f64..2.0, im in -2.0f64..2.0, phase in 0.0f64..6.28, p in 1.5f64..5.0) {
        let lambda = C::new(-1.0, 0.4);
        let u = C::new(re, im);
        let rot = C::from_polar(1.0, phase);
        let lhs = nonlinearity(lambda, p, u * rot);
        let rhs = nonlinearity(lambda, p, u) * rot;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }
}
