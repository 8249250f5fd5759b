//! Parameter sweeps shared by the command line and the acceptance suite.

use num_complex::Complex;
use rayon::prelude::*;

use crate::catalog::{self, TestFunctionSpec};
use crate::cgl::{
    decay_probe, weighted_probe, CglConfig, CglSolver, DecayProbe, Trajectory, WeightedProbe,
};
use crate::commutator::{shift_identity, verify_identity, IdentityReport};
use crate::error::{Error, Result};
use crate::estimates::{
    constant_a, constant_a_tilde, holder_interpolation_check, kernel_chain_check,
    verify_commutator_estimate, verify_lipschitz_commutator, verify_radial_estimate,
    EstimateReport, ExponentTriple, LipschitzWeight,
};
use crate::multiindex::{enumerate_up_to, MultiIndex};
use crate::scalar::Exponent;
use crate::semigroup::{ComplexParam, GridFunction, GridShape};

pub const DEFAULT_HALF_WIDTH: f64 = 16.0;

/// Points per axis of the default box for dimension `n`.
pub fn default_points(dim: usize) -> usize {
    match dim {
        1 => 512,
        2 => 256,
        _ => 64,
    }
}

pub fn default_shape(dim: usize) -> Result<GridShape<f64>> {
    GridShape::new(dim, default_points(dim), DEFAULT_HALF_WIDTH)
}

/// One `(α, ω, φ)` triple of the identity sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCase {
    pub alpha: MultiIndex,
    pub omega: Complex<f64>,
    pub testfn: String,
}

/// All `1 ≤ |α| ≤ max_order` for each dimension, crossed with `omegas` and `testfns`.
pub fn identity_cases(
    dims: &[usize],
    max_order: u32,
    omegas: &[Complex<f64>],
    testfns: &[String],
) -> Vec<IdentityCase> {
    let mut out = Vec::new();
    for &n in dims {
        for alpha in enumerate_up_to(n, max_order) {
            for &omega in omegas {
                for t in testfns {
                    out.push(IdentityCase {
                        alpha: alpha.clone(),
                        omega,
                        testfn: t.clone(),
                    });
                }
            }
        }
    }
    out
}

fn sample(spec: &TestFunctionSpec, shape: GridShape<f64>) -> Result<GridFunction<f64>> {
    spec.sample(shape)
}

/// Runs every case on `shape_for(n)`; reports keep the case order.
pub fn run_identity_sweep<F>(cases: &[IdentityCase], shape_for: F) -> Result<Vec<(IdentityCase, IdentityReport)>>
where
    F: Fn(usize) -> Result<GridShape<f64>> + Sync,
{
    let nested: Vec<Vec<(IdentityCase, IdentityReport)>> = cases
        .par_iter()
        .map(|case| {
            let shape = shape_for(case.alpha.dim())?;
            let phi = sample(&catalog::lookup(&case.testfn)?, shape)?;
            let omega = ComplexParam::new(case.omega)?;
            Ok(verify_identity(&case.alpha, &omega, &phi)?
                .into_iter()
                .map(|r| (case.clone(), r))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

/// The shift identity over `|α| ≤ max_order` and every axis.
pub fn run_shift_sweep<F>(
    dims: &[usize],
    max_order: u32,
    omegas: &[Complex<f64>],
    testfns: &[String],
    shape_for: F,
) -> Result<Vec<(IdentityCase, IdentityReport)>>
where
    F: Fn(usize) -> Result<GridShape<f64>> + Sync,
{
    let cases = identity_cases(dims, max_order, omegas, testfns);
    let nested: Vec<Vec<(IdentityCase, IdentityReport)>> = cases
        .par_iter()
        .map(|case| {
            let n = case.alpha.dim();
            let phi = sample(&catalog::lookup(&case.testfn)?, shape_for(n)?)?;
            let omega = ComplexParam::new(case.omega)?;
            (0..n)
                .map(|j| Ok((case.clone(), shift_identity(&case.alpha, j, &omega, &phi)?)))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

/// Parameters of the estimate sweep.
#[derive(Clone, Debug)]
pub struct EstimateSweep {
    pub dims: Vec<usize>,
    pub orders: Vec<u32>,
    pub pairs: Vec<(Exponent<f64>, Exponent<f64>)>,
    pub omegas: Vec<Complex<f64>>,
    pub testfns: Vec<String>,
    pub random_mixtures: usize,
    pub seed: u64,
}

impl Default for EstimateSweep {
    fn default() -> Self {
        let (one, two, inf) = (Exponent::one(), Exponent::two(), Exponent::Infinity);
        Self {
            dims: vec![1],
            orders: vec![1, 2, 3],
            pairs: vec![(one, one), (two, one), (inf, one), (two, two), (inf, two), (inf, inf)],
            omegas: vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.9)],
            testfns: vec!["gauss".into(), "gauss-shifted".into(), "mixture".into()],
            random_mixtures: 100,
            seed: 2024,
        }
    }
}

impl EstimateSweep {
    fn functions(&self) -> Result<Vec<TestFunctionSpec>> {
        let mut out = self
            .testfns
            .iter()
            .map(|id| catalog::lookup(id))
            .collect::<Result<Vec<_>>>()?;
        out.extend((0..self.random_mixtures as u64).map(|k| catalog::random_mixture(self.seed + k)));
        Ok(out)
    }

    /// Commutator-estimate reports over the full parameter product.
    pub fn run(&self) -> Result<Vec<EstimateReport>> {
        let functions = self.functions()?;
        let mut jobs = Vec::new();
        for &n in &self.dims {
            for f in &functions {
                jobs.push((n, f));
            }
        }
        let nested: Vec<Vec<EstimateReport>> = jobs
            .par_iter()
            .map(|&(n, spec)| {
                let phi = sample(spec, default_shape(n)?)?;
                let mut out = Vec::new();
                for &m in &self.orders {
                    for &(p, q) in &self.pairs {
                        let triple = ExponentTriple::new(p, q)?;
                        for &w in &self.omegas {
                            let omega = ComplexParam::new(w)?;
                            out.push(verify_commutator_estimate(m, triple, &omega, &phi, &spec.id)?);
                        }
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        Ok(nested.into_iter().flatten().collect())
    }

    /// Radial-weight reports for the built-in functions.
    pub fn run_radial(&self) -> Result<Vec<EstimateReport>> {
        let mut out = Vec::new();
        for &n in &self.dims {
            let shape = default_shape(n)?;
            for id in &self.testfns {
                let phi = sample(&catalog::lookup(id)?, shape)?;
                for &m in &self.orders {
                    for &(p, q) in &self.pairs {
                        let triple = ExponentTriple::new(p, q)?;
                        for &w in &self.omegas {
                            let omega = ComplexParam::new(w)?;
                            out.push(verify_radial_estimate(m, triple, &omega, &phi, id)?);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Lipschitz weights used by the commutator check: constants, `sin x₁`, and
/// mollified coordinates `η_{j,ε}`.
pub fn lipschitz_weights(shape: GridShape<f64>) -> Result<Vec<LipschitzWeight<f64>>> {
    let mut out = vec![
        LipschitzWeight {
            name: "const".into(),
            samples: GridFunction::from_fn(shape, |_| Complex::new(1.0, 0.0)),
            gradient_bound: 0.0,
        },
        LipschitzWeight {
            name: "sin".into(),
            samples: GridFunction::from_fn(shape, |x| Complex::new(x[0].sin(), 0.0)),
            gradient_bound: 1.0,
        },
    ];
    for j in 0..shape.dim() {
        for &eps in &[0.01, 0.1, 1.0] {
            out.push(crate::cgl::mollified_weight(shape, j, eps)?);
        }
    }
    Ok(out)
}

pub fn run_lipschitz_sweep(sweep: &EstimateSweep) -> Result<Vec<EstimateReport>> {
    let mut out = Vec::new();
    for &n in &sweep.dims {
        let shape = default_shape(n)?;
        let weights = lipschitz_weights(shape)?;
        for id in &sweep.testfns {
            let phi = sample(&catalog::lookup(id)?, shape)?;
            for eta in &weights {
                for &(p, q) in &sweep.pairs {
                    let triple = ExponentTriple::new(p, q)?;
                    for &w in &sweep.omegas {
                        let omega = ComplexParam::new(w)?;
                        out.push(verify_lipschitz_commutator(eta, triple, &omega, &phi, id)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `‖x^βG_{e^{iθ}}‖_r` against the Gaussian-moment bound, `1 ≤ |β| ≤ max_order`.
pub fn run_kernel_chain(
    dims: &[usize],
    max_order: u32,
    thetas: &[f64],
    rs: &[Exponent<f64>],
) -> Result<Vec<EstimateReport>> {
    let mut out = Vec::new();
    for &n in dims {
        let shape = default_shape(n)?;
        for beta in enumerate_up_to(n, max_order) {
            for &theta in thetas {
                for &r in rs {
                    out.push(kernel_chain_check(shape, &beta, theta, r)?);
                }
            }
        }
    }
    Ok(out)
}

/// Interpolation inequality for every `0 ≤ k ≤ m − 1`.
pub fn run_holder(sweep: &EstimateSweep, max_m: u32) -> Result<Vec<EstimateReport>> {
    let mut out = Vec::new();
    for &n in &sweep.dims {
        let shape = default_shape(n)?;
        for id in &sweep.testfns {
            let phi = sample(&catalog::lookup(id)?, shape)?;
            for m in 2..=max_m {
                for k in 0..m {
                    for q in [Exponent::one(), Exponent::two(), Exponent::Infinity] {
                        out.push(holder_interpolation_check(&phi, m, k, q, id)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// One row of the constants table.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantRow {
    pub n: usize,
    pub m: u32,
    pub r: Exponent<f64>,
    pub theta: f64,
    pub a: f64,
    pub a_tilde: f64,
}

pub fn constants_table(
    dims: &[usize],
    orders: &[u32],
    rs: &[Exponent<f64>],
    thetas: &[f64],
) -> Result<Vec<ConstantRow>> {
    let mut out = Vec::new();
    for &n in dims {
        for &m in orders {
            for &r in rs {
                for &theta in thetas {
                    out.push(ConstantRow {
                        n,
                        m,
                        r,
                        theta,
                        a: constant_a(n, m, r, theta)?,
                        a_tilde: constant_a_tilde(n, m, r, theta)?,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Default grid of the Ginzburg-Landau runs (`n = 1`).
pub fn cgl_default_shape() -> Result<GridShape<f64>> {
    GridShape::new(1, 4096, 192.0)
}

/// Everything the Ginzburg-Landau harness reports.
#[derive(Clone, Debug)]
pub struct CglOutcome {
    pub trajectory: Trajectory<f64>,
    pub decay: DecayProbe,
    pub weighted: Vec<WeightedProbe>,
}

impl CglOutcome {
    pub fn pass(&self) -> bool {
        self.decay.pass
            && self.weighted.iter().all(|w| w.pass)
            && self.trajectory.max_boundary_mass < 1e-10
    }
}

/// Runs from `u₀ = εG_σ` and probes decay for `r ∈ {1, 2, ∞}` and weights for each `m`.
pub fn run_cgl(
    cfg: &CglConfig<f64>,
    shape: GridShape<f64>,
    eps: f64,
    sigma: f64,
    orders: &[u32],
    q: Exponent<f64>,
) -> Result<CglOutcome> {
    let g = ComplexParam::real(sigma)?;
    let u0 = GridFunction::from_fn(shape, |x| crate::semigroup::kernel(&g, x) * eps);
    let trajectory = CglSolver::new(cfg.clone(), &u0)?.simulate(&u0)?;
    let decay = decay_probe(
        &trajectory,
        &[Exponent::one(), Exponent::two(), Exponent::Infinity],
    );
    let weighted = orders
        .iter()
        .map(|&m| weighted_probe(&trajectory, m, q))
        .collect::<Result<_>>()?;
    Ok(CglOutcome {
        trajectory,
        decay,
        weighted,
    })
}

/// Rejects `θ` outside `(−π/2, π/2)`.
pub fn check_theta(theta: f64) -> Result<()> {
    if !(theta.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!(
            "θ = {theta} lies outside (−π/2, π/2)"
        )));
    }
    Ok(())
}
