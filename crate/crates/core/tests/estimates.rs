use std::f64::consts::{E, FRAC_PI_2, PI};

use gw_commute::catalog;
use gw_commute::estimates::{
    commutator_rhs, constant_a, constant_a_tilde, holder_interpolation_check, kernel_chain_check,
    sup_gaussian_moment, verify_commutator_estimate, verify_radial_estimate, ExponentTriple,
};
use gw_commute::harness::{default_shape, lipschitz_weights, run_lipschitz_sweep, EstimateSweep};
use gw_commute::multiindex::enumerate_up_to;
use gw_commute::scalar::Exponent;
use gw_commute::semigroup::{lp_norm, weight_multiply, ComplexParam, Weight};
use num_complex::Complex;
use proptest::prelude::*;

fn exps() -> Vec<Exponent<f64>> {
    vec![
        Exponent::one(),
        Exponent::finite(1.5).unwrap(),
        Exponent::two(),
        Exponent::finite(4.0).unwrap(),
        Exponent::Infinity,
    ]
}

/// The constant rebuilt from its definition in log space.
fn log_constant(n: usize, m: u32, inv_r: f64, theta: f64, with_multiplicity: bool) -> f64 {
    let nf = n as f64;
    let mf = m as f64;
    let cos = theta.cos();
    let mut log = -(nf / 2.0) * (1.0 - inv_r) * (4.0 * PI).ln();
    if inv_r > 0.0 {
        log += (nf * inv_r / 2.0) * (2.0 * inv_r / cos).ln();
    }
    let root = (4.0 * mf / (E * cos)).sqrt();
    log += ((1.0 + root).powf(mf) - 1.0).ln();
    if with_multiplicity {
        // ln((n+m−1)!/((n−1)! m!))
        let lf = |k: usize| (1..=k).map(|j| (j as f64).ln()).sum::<f64>();
        log += lf(n + m as usize - 1) - lf(n - 1) - lf(m as usize);
    }
    log.exp()
}

#[test]
fn constants_match_log_space_reimplementation() {
    for n in 1..=3 {
        for m in 1..=6 {
            for r in exps() {
                for theta in [-1.5, -1.0, -0.3, 0.0, 0.4, 1.2, 1.55] {
                    let a = constant_a(n, m, r, theta).unwrap();
                    let at = constant_a_tilde(n, m, r, theta).unwrap();
                    let inv = r.reciprocal();
                    let oa = log_constant(n, m, inv, theta, true);
                    let ot = log_constant(n, m, inv, theta, false);
                    assert!((a - oa).abs() <= 1e-12 * oa, "A n={n} m={m} r={r} θ={theta}");
                    assert!((at - ot).abs() <= 1e-12 * ot, "Ã n={n} m={m} r={r} θ={theta}");
                }
            }
        }
    }
}

#[test]
fn reference_value_and_symmetry() {
    let a = constant_a(1, 1, Exponent::one(), 0.0).unwrap();
    let expected = 2f64.sqrt() * (4.0 / E).sqrt();
    assert!((a - expected).abs() <= 1e-12 * expected);
    for theta in [0.1, 0.7, 1.3, 1.5] {
        for r in exps() {
            let plus = constant_a(2, 3, r, theta).unwrap();
            let minus = constant_a(2, 3, r, -theta).unwrap();
            assert_eq!(plus, minus);
        }
    }
}

#[test]
fn constant_grows_toward_the_imaginary_axis() {
    let thetas: Vec<f64> = (0..60).map(|k| k as f64 * (FRAC_PI_2 - 1e-3) / 59.0).collect();
    for n in 1..=3 {
        for m in 1..=4 {
            for r in exps() {
                let values: Vec<f64> = thetas.iter().map(|&t| constant_a(n, m, r, t).unwrap()).collect();
                assert!(values.windows(2).all(|w| w[1] > w[0]), "n={n} m={m} r={r}");
            }
        }
    }
    assert!(constant_a(1, 1, Exponent::one(), FRAC_PI_2).is_err());
    assert!(constant_a(1, 1, Exponent::one(), -1.58).is_err());
}

/// Golden-section maximisation of a unimodal function on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    while b - a > 1e-12 * (1.0 + b.abs()) {
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    f((a + b) / 2.0)
}

#[test]
fn gaussian_moment_supremum_matches_direct_maximisation() {
    for k in 1..=8u32 {
        for theta in [0.0f64, 0.5, -1.0, 1.4] {
            let cos = theta.cos();
            let f = |rho: f64| rho.powi(k as i32) * (-rho * rho * cos / 8.0).exp();
            let found = golden_max(f, 0.0, 40.0 / cos.sqrt());
            let closed = sup_gaussian_moment(k, theta).unwrap();
            assert!((found - closed).abs() <= 1e-9 * closed, "k={k} θ={theta}");
        }
    }
}

#[test]
fn exponent_triples() {
    let t = ExponentTriple::<f64>::new(Exponent::two(), Exponent::one()).unwrap();
    assert_eq!(t.r, Exponent::two());
    let t = ExponentTriple::<f64>::new(Exponent::Infinity, Exponent::one()).unwrap();
    assert!(t.r.is_infinite());
    let t = ExponentTriple::new(Exponent::<f64>::Infinity, Exponent::Infinity).unwrap();
    assert_eq!(t.r, Exponent::one());
    assert!(ExponentTriple::<f64>::new(Exponent::one(), Exponent::two()).is_err());
    let t = ExponentTriple::<f64>::new(Exponent::finite(4.0).unwrap(), Exponent::two()).unwrap();
    assert!((t.r.reciprocal() - 0.75).abs() < 1e-15);
    assert!((t.decay_exponent(3) - 0.375).abs() < 1e-15);
}

fn pairs() -> Vec<(Exponent<f64>, Exponent<f64>)> {
    EstimateSweep::default().pairs
}

#[test]
fn right_hand_side_rescales_with_the_modulus() {
    let shape = default_shape(1).unwrap();
    let phi = catalog::lookup("mixture").unwrap().sample(shape).unwrap();
    for m in 1..=3 {
        for (p, q) in pairs() {
            let triple = ExponentTriple::new(p, q).unwrap();
            let w = ComplexParam::new(Complex::new(0.6, 0.8)).unwrap();
            let base = verify_commutator_estimate(m, triple, &w, &phi, "mixture").unwrap();
            let weighted = lp_norm(&weight_multiply(&phi, &Weight::Radial(m - 1)).unwrap(), q);
            let plain = lp_norm(&phi, q);
            for lambda in [0.25, 4.0] {
                let scaled = verify_commutator_estimate(m, triple, &w.scaled(lambda).unwrap(), &phi, "mixture").unwrap();
                assert_eq!(scaled.constant, base.constant);
                let recomputed = commutator_rhs(base.constant, 1, m, &triple, lambda, weighted, plain);
                assert!((scaled.rhs - recomputed).abs() <= 1e-12 * recomputed, "m={m} p={p} q={q} λ={lambda}");
                // the explicit powers of |ω|
                let d = triple.decay_exponent(1);
                let by_hand = base.constant
                    * lambda.powf(-d)
                    * (lambda.sqrt() * weighted + lambda.powf(m as f64 / 2.0) * plain);
                assert!((scaled.rhs - by_hand).abs() <= 1e-12 * by_hand);
            }
        }
    }
}

#[test]
fn commutator_estimate_holds_on_a_small_sweep() {
    let sweep = EstimateSweep {
        random_mixtures: 8,
        omegas: vec![Complex::new(1.0, 0.0), Complex::new(0.3, 1.2), Complex::new(3.0, -1.0)],
        ..EstimateSweep::default()
    };
    let reports = sweep.run().unwrap();
    assert_eq!(reports.len(), 11 * 3 * 6 * 3);
    for r in reports {
        assert!(r.pass, "{r:?}");
        assert!(r.margin >= 0.0);
    }
}

#[test]
fn commutator_estimate_holds_in_two_dimensions() {
    let shape = default_shape(2).unwrap();
    for id in ["gauss-shifted", "mixture"] {
        let phi = catalog::lookup(id).unwrap().sample(shape).unwrap();
        for m in 1..=2 {
            for (p, q) in pairs() {
                let w = ComplexParam::new(Complex::new(1.0, 0.9)).unwrap();
                let r = verify_commutator_estimate(m, ExponentTriple::new(p, q).unwrap(), &w, &phi, id).unwrap();
                assert!(r.pass, "{r:?}");
            }
        }
    }
}

#[test]
fn radial_estimate_holds() {
    let reports = EstimateSweep::default().run_radial().unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r.pass), "{:?}", reports.iter().find(|r| !r.pass));
    let shape = default_shape(2).unwrap();
    let phi = catalog::lookup("mixture").unwrap().sample(shape).unwrap();
    let w = ComplexParam::new(Complex::new(0.5, -0.5)).unwrap();
    for m in 1..=3 {
        let r = verify_radial_estimate(m, ExponentTriple::new(Exponent::two(), Exponent::one()).unwrap(), &w, &phi, "mixture").unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn lipschitz_commutator_holds() {
    let reports = run_lipschitz_sweep(&EstimateSweep::default()).unwrap();
    assert!(reports.iter().any(|r| r.kind.contains("eta")));
    assert!(reports.iter().all(|r| r.pass), "{:?}", reports.iter().find(|r| !r.pass));
    let weights = lipschitz_weights(default_shape(1).unwrap()).unwrap();
    assert!(weights.iter().filter(|w| w.name.starts_with("eta")).all(|w| w.gradient_bound == 2.0));
}

#[test]
fn holder_interpolation_holds() {
    let shape = default_shape(1).unwrap();
    for id in ["gauss", "gauss-shifted", "mixture", "bandlimited"] {
        let phi = catalog::lookup(id).unwrap().sample(shape).unwrap();
        for m in 2..=5 {
            for k in 0..m {
                for q in [Exponent::one(), Exponent::two(), Exponent::finite(3.0).unwrap(), Exponent::Infinity] {
                    let r = holder_interpolation_check(&phi, m, k, q, id).unwrap();
                    assert!(r.pass, "{r:?}");
                }
            }
        }
    }
    assert!(holder_interpolation_check(&catalog::lookup("gauss").unwrap().sample(shape).unwrap(), 1, 0, Exponent::one(), "gauss").is_err());
}

#[test]
fn kernel_chain_holds() {
    for n in 1..=2 {
        let shape = default_shape(n).unwrap();
        for beta in enumerate_up_to(n, 4) {
            for theta in [0.0, 0.6, -1.2, 1.45] {
                for r in exps() {
                    let rep = kernel_chain_check(shape, &beta, theta, r).unwrap();
                    assert!(rep.pass, "{rep:?}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constant_is_even_and_positive(theta in -1.5f64..1.5, m in 1u32..6, n in 1usize..4, s in 0.0f64..1.0) {
        let r = Exponent::from_reciprocal(s).unwrap();
        let a = constant_a(n, m, r, theta).unwrap();
        prop_assert!(a > 0.0 && a.is_finite());
        prop_assert_eq!(a, constant_a(n, m, r, -theta).unwrap());
        prop_assert!(a >= constant_a_tilde(n, m, r, theta).unwrap());
    }
}
