//! Named, rapidly decaying test functions.
//!
//! Every built-in entry keeps its L¹ mass within distance `L/2` of the
//! boundary below `1e−12` on the default box `L = 16`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::semigroup::{kernel, ComplexParam, GridFunction, GridShape};

/// One Gaussian bump `w·G_σ(x − c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bump {
    pub weight: Complex<f64>,
    pub sigma: f64,
    /// Missing trailing coordinates are zero.
    pub center: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TestFunctionKind {
    Gaussian { sigma: f64, center: Vec<f64> },
    Mixture(Vec<Bump>),
    /// `e^{−|x|²/(4σ)} Σ_k a_k e^{iξ_k·x}` with `|ξ_k|_∞ ≤ cutoff`.
    BandlimitedRandom {
        seed: u64,
        cutoff: f64,
        envelope: f64,
        modes: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestFunctionSpec {
    pub id: String,
    pub kind: TestFunctionKind,
}

fn shifted<T: Real>(x: &[T], center: &[f64]) -> Vec<T> {
    x.iter()
        .enumerate()
        .map(|(a, &xi)| xi - T::lit(center.get(a).copied().unwrap_or(0.0)))
        .collect()
}

fn c64<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}

impl TestFunctionSpec {
    pub fn new(id: impl Into<String>, kind: TestFunctionKind) -> Self {
        Self { id: id.into(), kind }
    }

    /// Samples on `shape`.
    pub fn sample<T: Real>(&self, shape: GridShape<T>) -> Result<GridFunction<T>> {
        let dim = shape.dim();
        let out = match &self.kind {
            TestFunctionKind::Gaussian { sigma, center } => {
                let w = ComplexParam::real(T::lit(*sigma))?;
                GridFunction::from_fn(shape, |x| kernel(&w, &shifted(x, center)))
            }
            TestFunctionKind::Mixture(bumps) => {
                let params = bumps
                    .iter()
                    .map(|b| Ok((ComplexParam::real(T::lit(b.sigma))?, c64::<T>(b.weight), &b.center)))
                    .collect::<Result<Vec<_>>>()?;
                GridFunction::from_fn(shape, |x| {
                    params
                        .iter()
                        .fold(Complex::new(T::zero(), T::zero()), |acc, (w, c, center)| {
                            acc + *c * kernel(w, &shifted(x, center))
                        })
                })
            }
            TestFunctionKind::BandlimitedRandom {
                seed,
                cutoff,
                envelope,
                modes,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let terms: Vec<(Complex<T>, Vec<T>)> = (0..*modes)
                    .map(|_| {
                        let a = Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                        let xi = (0..dim)
                            .map(|_| T::lit(rng.random_range(-*cutoff..=*cutoff)))
                            .collect();
                        (c64::<T>(a), xi)
                    })
                    .collect();
                let inv4s = T::lit(1.0 / (4.0 * envelope));
                GridFunction::from_fn(shape, |x| {
                    let r2: T = x.iter().map(|&v| v * v).sum();
                    let env = (-r2 * inv4s).exp();
                    let wave = terms.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (a, xi)| {
                        let phase: T = xi.iter().zip(x).map(|(&k, &v)| k * v).sum();
                        acc + *a * Complex::from_polar(T::one(), phase)
                    });
                    wave * env
                })
            }
        };
        GridFunction::new(shape, out.into_samples())
    }

    /// Exact `‖φ‖₁` where it is known in closed form.
    pub fn analytic_l1(&self) -> Option<f64> {
        match &self.kind {
            TestFunctionKind::Gaussian { .. } => Some(1.0),
            _ => None,
        }
    }

    /// Whether `φ ≥ 0` and real.
    pub fn is_nonnegative(&self) -> bool {
        match &self.kind {
            TestFunctionKind::Gaussian { .. } => true,
            TestFunctionKind::Mixture(b) => b.iter().all(|b| b.weight.im == 0.0 && b.weight.re >= 0.0),
            TestFunctionKind::BandlimitedRandom { .. } => false,
        }
    }
}

/// The built-in entries, in a fixed order.
pub fn builtin() -> Vec<TestFunctionSpec> {
    use TestFunctionKind::*;
    vec![
        TestFunctionSpec::new("gauss", Gaussian { sigma: 0.5, center: vec![] }),
        TestFunctionSpec::new(
            "gauss-narrow",
            Gaussian { sigma: 0.25, center: vec![] },
        ),
        TestFunctionSpec::new(
            "gauss-shifted",
            Gaussian { sigma: 0.4, center: vec![0.75, -0.5, 0.25] },
        ),
        TestFunctionSpec::new(
            "mixture",
            Mixture(vec![
                Bump { weight: Complex::new(1.0, 0.0), sigma: 0.5, center: vec![-0.6, 0.3] },
                Bump { weight: Complex::new(0.5, -0.5), sigma: 0.3, center: vec![0.6, -0.2] },
                Bump { weight: Complex::new(-0.25, 0.75), sigma: 0.25, center: vec![0.0, 0.5] },
            ]),
        ),
        TestFunctionSpec::new(
            "bandlimited",
            BandlimitedRandom { seed: 7, cutoff: 3.0, envelope: 0.5, modes: 6 },
        ),
    ]
}

pub fn lookup(id: &str) -> Result<TestFunctionSpec> {
    builtin()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown test function '{id}'")))
}

/// A random mixture of one to three bumps, reproducible from `seed`.
pub fn random_mixture(seed: u64) -> TestFunctionSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.random_range(1..=3);
    let bumps = (0..count)
        .map(|_| Bump {
            weight: Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            sigma: rng.random_range(0.2..0.5),
            center: (0..3).map(|_| rng.random_range(-0.5..0.5)).collect(),
        })
        .collect();
    TestFunctionSpec::new(format!("mixture-{seed}"), TestFunctionKind::Mixture(bumps))
}
