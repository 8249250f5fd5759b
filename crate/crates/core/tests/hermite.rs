use gw_commute::hermite::{
    gaussian_derivative, generate_by_recurrence, hermite_recurrence, reconstruct_monomial, Flavor,
    HermitePoly, LaurentPoly,
};
use gw_commute::multiindex::{enumerate_up_to, MultiIndex};
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex<f64>;

fn mi(c: &[u32]) -> MultiIndex {
    MultiIndex::new(c.to_vec()).unwrap()
}

fn all_indices() -> Vec<MultiIndex> {
    (1..=3).flat_map(|n| enumerate_up_to(n, 8)).collect()
}

#[test]
fn recurrence_generation_matches_closed_form() {
    for alpha in all_indices() {
        for flavor in [Flavor::Standard, Flavor::HalfArgument] {
            assert_eq!(
                generate_by_recurrence(&alpha, flavor),
                HermitePoly::closed_form(&alpha, flavor),
                "{alpha:?} {flavor}"
            );
        }
    }
}

#[test]
fn monomials_reconstruct_exactly() {
    for alpha in all_indices() {
        assert_eq!(
            reconstruct_monomial(&alpha),
            HermitePoly::monomial(&alpha, Flavor::HalfArgument),
            "{alpha:?}"
        );
    }
}

#[test]
fn recurrence_holds_on_every_axis() {
    for alpha in all_indices() {
        for j in 0..alpha.dim() {
            for flavor in [Flavor::Standard, Flavor::HalfArgument] {
                assert!(hermite_recurrence(&alpha, j, flavor).holds(), "{alpha:?} axis {j}");
            }
        }
    }
}

#[test]
fn half_argument_transport_is_exact() {
    for alpha in all_indices() {
        let big = HermitePoly::closed_form(&alpha, Flavor::Standard);
        let small = HermitePoly::closed_form(&alpha, Flavor::HalfArgument);
        assert_eq!(big.to_half_argument().unwrap(), small);
        assert_eq!(small.to_standard().unwrap(), big);
    }
}

#[test]
fn one_dimensional_examples() {
    // 𝑯_{ω,2}(x) = 4x²/ω² − 2/ω and 𝑯_{ω,3}(x) = 8x³/ω³ − 12x/ω²
    let h2 = HermitePoly::closed_form(&mi(&[2]), Flavor::Standard);
    assert_eq!(h2.coeff(&mi(&[2])), LaurentPoly::monomial(4, -2));
    assert_eq!(h2.coeff(&mi(&[0])), LaurentPoly::monomial(-2, -1));
    let h3 = HermitePoly::closed_form(&mi(&[3]), Flavor::Standard);
    assert_eq!(h3.coeff(&mi(&[3])), LaurentPoly::monomial(8, -3));
    assert_eq!(h3.coeff(&mi(&[1])), LaurentPoly::monomial(-12, -2));
    assert!(h3.coeff(&mi(&[2])).is_zero());
    // at ω = 1 the standard flavor is the physicists' family
    let h4 = HermitePoly::closed_form(&mi(&[4]), Flavor::Standard);
    let at_one: Vec<_> = (0..=4).map(|k| h4.coeff(&mi(&[k])).at_one()).collect();
    let expected: Vec<num_bigint::BigInt> = [12, 0, -48, 0, 16].iter().map(|&v| v.into()).collect();
    assert_eq!(at_one, expected);
}

#[test]
fn mixing_flavors_is_an_error() {
    let a = HermitePoly::closed_form(&mi(&[1, 1]), Flavor::Standard);
    let b = HermitePoly::closed_form(&mi(&[1, 1]), Flavor::HalfArgument);
    assert!(a.try_add(&b).is_err());
    assert!(b.to_half_argument().is_err());
}

#[test]
fn inverted_parameter_evaluates_at_reciprocal() {
    let w = C::new(0.8, -0.6);
    let x = [0.3, -1.1];
    for alpha in enumerate_up_to(2, 5) {
        let p = HermitePoly::closed_form(&alpha, Flavor::Standard);
        let lhs = p.invert_parameter().eval(w, &x);
        let rhs = p.eval(w.inv(), &x);
        assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()), "{alpha:?}");
    }
}

fn axis_factor(w: C, z: C) -> C {
    (C::new(4.0 * std::f64::consts::PI, 0.0) * w).sqrt().inv() * (-(z * z) / (w * 4.0)).exp()
}

fn kernel(w: C, x: &[f64]) -> C {
    x.iter().map(|&v| axis_factor(w, C::new(v, 0.0))).product()
}

/// Central differences with a tensor stencil, orders ≤ 2 per axis.
fn finite_difference(alpha: &MultiIndex, w: C, x: &[f64]) -> C {
    let h: Vec<f64> = x.iter().map(|v| 1e-4 * (1.0 + v.abs())).collect();
    let stencils: Vec<Vec<(f64, f64)>> = alpha
        .components()
        .iter()
        .zip(&h)
        .map(|(&a, &h)| match a {
            0 => vec![(0.0, 1.0)],
            1 => vec![(h, 0.5 / h), (-h, -0.5 / h)],
            2 => vec![(h, 1.0 / (h * h)), (0.0, -2.0 / (h * h)), (-h, 1.0 / (h * h))],
            _ => unreachable!(),
        })
        .collect();
    let mut acc = C::new(0.0, 0.0);
    let mut idx = vec![0usize; x.len()];
    loop {
        let mut y = x.to_vec();
        let mut wt = 1.0;
        for (k, &i) in idx.iter().enumerate() {
            y[k] += stencils[k][i].0;
            wt *= stencils[k][i].1;
        }
        acc += kernel(w, &y) * wt;
        let mut k = 0;
        loop {
            if k == idx.len() {
                return acc;
            }
            idx[k] += 1;
            if idx[k] < stencils[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `f^{(k)}(x) = k!/(2πi)∮ f(z)(z−x)^{−k−1} dz` on a circle, trapezoid rule.
fn contour_derivative(w: C, x: f64, k: u32) -> C {
    let m = 64;
    let rho = 1.0;
    let mut acc = C::new(0.0, 0.0);
    for j in 0..m {
        let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
        let u = C::from_polar(1.0, t);
        acc += axis_factor(w, C::new(x, 0.0) + u * rho) * u.powi(-(k as i32));
    }
    let fact: f64 = (1..=k).map(f64::from).product();
    acc * fact / (m as f64 * rho.powi(k as i32))
}

fn contour_oracle(alpha: &MultiIndex, w: C, x: &[f64]) -> C {
    alpha
        .components()
        .iter()
        .zip(x)
        .map(|(&a, &v)| contour_derivative(w, v, a))
        .product()
}

fn random_points(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.random_range(-2.5..2.5)).collect())
        .collect()
}

const OMEGAS: [(f64, f64); 4] = [(1.0, 0.0), (0.5, 0.0), (1.0, 1.0), (0.7, -0.4)];

fn check_against(oracle: impl Fn(&MultiIndex, C, &[f64]) -> C, max_order: u32, tol: f64, skip: impl Fn(&MultiIndex) -> bool) {
    for n in 1..=3 {
        for alpha in enumerate_up_to(n, max_order) {
            if skip(&alpha) {
                continue;
            }
            for &(re, im) in &OMEGAS {
                let w = C::new(re, im);
                let pts = random_points(n, 20, 17 + n as u64);
                let exact: Vec<C> = pts
                    .iter()
                    .map(|x| gaussian_derivative(&alpha, w, x).unwrap())
                    .collect();
                for (x, e) in pts.iter().zip(&exact) {
                    let approx = oracle(&alpha, w, x);
                    // natural size of ∂^αG_ω at x, guards points near a zero of the derivative
                    let scale = kernel(w, x).norm() * w.norm().powf(-0.5 * alpha.order() as f64);
                    let err = (approx - e).norm() / e.norm().max(scale);
                    assert!(err <= tol, "{alpha:?} ω={w} x={x:?}: {err:e}");
                }
            }
        }
    }
}

#[test]
fn finite_differences_agree_to_order_two() {
    check_against(finite_difference, 2, 1e-6, |a| a.components().iter().any(|&c| c > 2));
}

#[test]
fn contour_integrals_agree_to_order_three() {
    check_against(contour_oracle, 3, 1e-10, |_| false);
}

#[test]
fn order_zero_is_the_kernel() {
    let w = C::new(0.9, 0.3);
    for x in random_points(3, 5, 1) {
        let g = gaussian_derivative(&MultiIndex::zero(3), w, &x).unwrap();
        assert!((g - kernel(w, &x)).norm() <= 1e-14 * g.norm());
    }
}

proptest! {
    #[test]
    fn evaluation_agrees_across_flavors(a in 0u32..6, b in 0u32..6, x in -3.0f64..3.0, y in -3.0f64..3.0, re in 0.2f64..2.0, im in -1.0f64..1.0) {
        let alpha = mi(&[a, b]);
        let w = C::new(re, im);
        let big = HermitePoly::closed_form(&alpha, Flavor::Standard).eval(w, &[x / 2.0, y / 2.0]);
        let small = HermitePoly::closed_form(&alpha, Flavor::HalfArgument).eval(w, &[x, y]);
        prop_assert!((big - small).norm() <= 1e-10 * (1.0 + small.norm()));
    }
}
