use gw_commute::catalog;
use gw_commute::commutator::{
    coefficient_checksum, commutator_direct, evaluate_r_convolution, evaluate_r_expansion,
    evaluate_r_fourier_hermite, expand_r_terms, is_identically_zero, shift_identity,
    verify_identity, Method, IDENTITY_TOLERANCE,
};
use gw_commute::estimates::gaussian_derivative_grid;
use gw_commute::multiindex::{enumerate_up_to, MultiIndex};
use gw_commute::semigroup::{
    relative_l2_error, semigroup_derivative, ComplexParam, GridFunction, GridShape,
};
use num_bigint::BigUint;
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

fn mi(c: &[u32]) -> MultiIndex {
    MultiIndex::new(c.to_vec()).unwrap()
}

fn shape(n: usize) -> GridShape<f64> {
    gw_commute::harness::default_shape(n).unwrap()
}

fn sample(id: &str, n: usize) -> GridFunction<f64> {
    catalog::lookup(id).unwrap().sample(shape(n)).unwrap()
}

/// EGF `e^{2t+t²}`: `c(k) = 2c(k−1) + 2(k−1)c(k−2)`.
fn axis_sum(k: u32) -> BigUint {
    let mut c = vec![BigUint::from(1u32), BigUint::from(2u32)];
    for j in 2..=k as usize {
        let next = &c[j - 1] * 2u32 + &c[j - 2] * (2 * (j as u32 - 1));
        c.push(next);
    }
    c[k as usize].clone()
}

#[test]
fn coefficient_sum_matches_generating_function() {
    for n in 1..=3 {
        for alpha in enumerate_up_to(n, 8) {
            let expected = alpha
                .components()
                .iter()
                .fold(BigUint::from(1u32), |acc, &a| acc * axis_sum(a))
                - 1u32;
            assert_eq!(coefficient_checksum(&alpha).unwrap(), expected, "{alpha:?}");
        }
    }
}

#[test]
fn term_count_and_powers() {
    // one term per (β ≠ 0, κ) with 2κ ≤ β ≤ α
    for alpha in enumerate_up_to(2, 6) {
        let terms = expand_r_terms(&alpha).unwrap();
        let expected: usize = alpha
            .dominated()
            .iter()
            .filter(|b| !b.is_zero())
            .map(|b| b.components().iter().map(|&x| (x / 2) as usize + 1).product::<usize>())
            .sum();
        assert_eq!(terms.len(), expected);
        for t in &terms {
            let beta = t.kappa.scale(2).checked_add(&t.delta).unwrap();
            assert_eq!(t.gamma.checked_add(&beta).unwrap(), alpha);
            assert!(t.omega_power() >= 1 && t.omega_power() <= alpha.order());
        }
    }
}

#[test]
fn three_way_agreement() {
    let omegas = [C::new(1.0, 0.0), C::new(0.4, 0.0), C::new(0.8, 0.9), C::new(0.6, -0.5)];
    for n in 1..=2 {
        for id in ["gauss", "gauss-shifted", "mixture", "bandlimited"] {
            let phi = sample(id, n);
            for alpha in enumerate_up_to(n, 3) {
                for &w in &omegas {
                    let w = ComplexParam::new(w).unwrap();
                    for r in verify_identity(&alpha, &w, &phi).unwrap() {
                        assert!(r.pass, "{id} {r:?}");
                        assert_eq!(r.tolerance, IDENTITY_TOLERANCE);
                    }
                }
            }
        }
    }
}

#[test]
fn quadrature_direct_commutator_agrees() {
    let phi = sample("mixture", 1);
    let w = ComplexParam::new(C::new(0.7, 0.4)).unwrap();
    for alpha in enumerate_up_to(1, 4) {
        let q = commutator_direct(&alpha, &w, &phi, Method::Quadrature).unwrap();
        let f = commutator_direct(&alpha, &w, &phi, Method::Fourier).unwrap();
        let e = evaluate_r_expansion(&alpha, &w, &phi).unwrap();
        assert!(relative_l2_error(&q, &f).unwrap() <= 1e-8);
        assert!(relative_l2_error(&q, &e).unwrap() <= 1e-8);
    }
}

#[test]
fn degree_one_is_a_single_derivative() {
    for n in 1..=2 {
        let phi = sample("mixture", n);
        let w = ComplexParam::new(C::new(0.9, -0.3)).unwrap();
        for j in 0..n {
            let e = MultiIndex::unit(n, j);
            let expected = semigroup_derivative(&phi, w.value(), &e)
                .unwrap()
                .scale(w.value() * -2.0);
            let got = evaluate_r_expansion(&e, &w, &phi).unwrap();
            assert_eq!(got.samples(), expected.samples(), "axis {j}");
        }
    }
}

#[test]
fn first_moment_of_a_gaussian() {
    // [x, e^{Δ}]G_{1/2} = −2∂G_{3/2}
    let s = shape(1);
    let phi = gaussian_derivative_grid(s, &mi(&[0]), C::new(0.5, 0.0)).unwrap();
    let exact = gaussian_derivative_grid(s, &mi(&[1]), C::new(1.5, 0.0))
        .unwrap()
        .scale(C::new(-2.0, 0.0));
    let w = ComplexParam::real(1.0).unwrap();
    let alpha = mi(&[1]);
    for got in [
        commutator_direct(&alpha, &w, &phi, Method::Fourier).unwrap(),
        commutator_direct(&alpha, &w, &phi, Method::Quadrature).unwrap(),
        evaluate_r_expansion(&alpha, &w, &phi).unwrap(),
        evaluate_r_convolution(&alpha, &w, &phi).unwrap(),
        evaluate_r_fourier_hermite(&alpha, &w, &phi).unwrap(),
    ] {
        assert!(relative_l2_error(&got, &exact).unwrap() <= 1e-8);
    }
}

#[test]
fn zero_and_dimension_errors() {
    let z = GridFunction::zeros(shape(1));
    let w = ComplexParam::real(0.5).unwrap();
    assert!(is_identically_zero(&evaluate_r_expansion(&mi(&[2]), &w, &z).unwrap()));
    assert!(evaluate_r_expansion(&mi(&[1, 1]), &w, &z).is_err());
    assert!(evaluate_r_expansion(&mi(&[0]), &w, &z).is_err());
    assert!(shift_identity(&mi(&[1]), 1, &w, &z).is_err());
}

#[test]
fn shift_identity_small_sweep() {
    for n in 1..=2 {
        let phi = sample("gauss-shifted", n);
        for alpha in enumerate_up_to(n, 2) {
            for w in [C::new(1.0, 0.0), C::new(0.5, 0.5)] {
                let w = ComplexParam::new(w).unwrap();
                for j in 0..n {
                    let r = shift_identity(&alpha, j, &w, &phi).unwrap();
                    assert!(r.pass, "{r:?}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn expansion_is_linear_in_the_input(a in 1u32..4, re in -2.0f64..2.0, im in -2.0f64..2.0, wr in 0.2f64..1.5, wi in -1.0f64..1.0) {
        let s = GridShape::new(1, 256, 16.0).unwrap();
        let f = catalog::lookup("gauss").unwrap().sample(s).unwrap();
        let g = catalog::lookup("bandlimited").unwrap().sample(s).unwrap();
        let w = ComplexParam::new(C::new(wr, wi)).unwrap();
        let alpha = mi(&[a]);
        let k = C::new(re, im);
        let lhs = evaluate_r_expansion(&alpha, &w, &f.linear_combination(k, &g, C::new(1.0, 0.0)).unwrap()).unwrap();
        let rhs = evaluate_r_expansion(&alpha, &w, &f).unwrap()
            .linear_combination(k, &evaluate_r_expansion(&alpha, &w, &g).unwrap(), C::new(1.0, 0.0)).unwrap();
        prop_assert!(relative_l2_error(&lhs, &rhs).unwrap() <= 1e-12);
    }
}
