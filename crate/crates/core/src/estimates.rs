//! Explicit commutator-estimate constants and numerical verification of the
//! inequalities they enter.

use num_complex::Complex;
use num_traits::ToPrimitive;

use crate::commutator::{commutator_direct, Method};
use crate::error::{Error, Result};
use crate::hermite::GaussianDerivative;
use crate::multiindex::{binomial, enumerate_level, MultiIndex};
use crate::scalar::{Exponent, Real};
use crate::semigroup::{
    apply_fourier, gaussian_kernel_norm, lp_norm, semigroup_derivative, weight_multiply,
    weighted_kernel_norm, ComplexParam, GridFunction, GridShape, Weight,
};

/// Slack applied to every right-hand side before comparison.
pub const RHS_SLACK: f64 = 1e-9;

/// `(p, q, r)` with `q ≤ p` and `1/p + 1 = 1/r + 1/q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentTriple<T: Real> {
    pub p: Exponent<T>,
    pub q: Exponent<T>,
    pub r: Exponent<T>,
}

impl<T: Real> ExponentTriple<T> {
    pub fn new(p: Exponent<T>, q: Exponent<T>) -> Result<Self> {
        let (sp, sq) = (p.reciprocal(), q.reciprocal());
        if sp > sq + T::lit(64.0) * T::epsilon() {
            return Err(Error::InvalidParameter(format!(
                "need q ≤ p, got p = {p}, q = {q}"
            )));
        }
        let r = Exponent::from_reciprocal(sp + T::one() - sq)?;
        Ok(Self { p, q, r })
    }

    /// `(n/2)(1/q − 1/p)`.
    pub fn decay_exponent(&self, dim: usize) -> T {
        T::from_count(dim) * T::lit(0.5) * (self.q.reciprocal() - self.p.reciprocal())
    }
}

fn check_theta<T: Real>(theta: T) -> Result<T> {
    if !(theta.abs() < T::FRAC_PI_2()) {
        return Err(Error::InvalidParameter(format!(
            "θ = {theta} is outside (−π/2, π/2); the constant diverges"
        )));
    }
    Ok(theta.cos())
}

/// `Ã_{m,r}(θ)`: the constant without the multiplicity factor.
pub fn constant_a_tilde<T: Real>(dim: usize, m: u32, r: Exponent<T>, theta: T) -> Result<T> {
    if m == 0 || dim == 0 {
        return Err(Error::InvalidParameter("need n ≥ 1 and m ≥ 1".into()));
    }
    let cos = check_theta(theta)?;
    let n = T::from_count(dim);
    let s = r.reciprocal();
    let half = T::lit(0.5);
    let four_pi = T::lit(4.0) * T::PI();
    let lebesgue = four_pi.powf(-n * half * (T::one() - s));
    let spread = (T::lit(2.0) * s / cos).powf(n * s * half);
    let mf = T::from_count(m as usize);
    let root = (T::lit(4.0) * mf / (T::E() * cos)).sqrt();
    let bracket = (root + T::one()).powi(m as i32) - T::one();
    Ok(lebesgue * spread * bracket)
}

/// `A_{m,r}(θ) = C(n+m−1, m)·Ã_{m,r}(θ)`.
pub fn constant_a<T: Real>(dim: usize, m: u32, r: Exponent<T>, theta: T) -> Result<T> {
    let tilde = constant_a_tilde(dim, m, r, theta)?;
    let mult = binomial(dim as u32 + m - 1, m)
        .to_f64()
        .unwrap_or(f64::INFINITY);
    Ok(T::lit(mult) * tilde)
}

/// `sup_ρ ρ^k e^{−ρ² cos θ/8} = (4k/(e cos θ))^{k/2}`.
pub fn sup_gaussian_moment<T: Real>(k: u32, theta: T) -> Result<T> {
    let cos = check_theta(theta)?;
    let kf = T::from_count(k as usize);
    Ok((T::lit(4.0) * kf / (T::E() * cos)).powf(kf * T::lit(0.5)))
}

/// Right-hand side `K |ω|^{−(n/2)(1/q−1/p)} (|ω|^{1/2} W + |ω|^{m/2} N)`.
pub fn commutator_rhs<T: Real>(
    constant: T,
    dim: usize,
    m: u32,
    triple: &ExponentTriple<T>,
    omega_abs: T,
    weighted_norm: T,
    norm: T,
) -> T {
    let scale = omega_abs.powf(-triple.decay_exponent(dim));
    let half = T::lit(0.5);
    constant
        * scale
        * (omega_abs.sqrt() * weighted_norm
            + omega_abs.powf(T::from_count(m as usize) * half) * norm)
}

/// One inequality check.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub kind: String,
    pub n: usize,
    pub m: u32,
    pub p: Exponent<f64>,
    pub q: Exponent<f64>,
    pub r: Exponent<f64>,
    pub omega: Complex<f64>,
    pub test_fn: String,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub margin: f64,
    pub pass: bool,
}

fn exp64<T: Real>(e: Exponent<T>) -> Exponent<f64> {
    match e {
        Exponent::Finite(p) => Exponent::Finite(p.to_f64_lossy()),
        Exponent::Infinity => Exponent::Infinity,
    }
}

/// Shared parameters of a report row.
#[derive(Clone, Debug)]
pub struct ReportContext<'a, T: Real> {
    pub kind: &'a str,
    pub dim: usize,
    pub m: u32,
    pub triple: ExponentTriple<T>,
    pub omega: Complex<T>,
    pub test_fn: &'a str,
}

impl EstimateReport {
    pub fn new<T: Real>(ctx: &ReportContext<'_, T>, lhs: T, rhs: T, constant: T) -> Self {
        let (lhs, rhs) = (lhs.to_f64_lossy(), rhs.to_f64_lossy());
        Self {
            kind: ctx.kind.to_string(),
            n: ctx.dim,
            m: ctx.m,
            p: exp64(ctx.triple.p),
            q: exp64(ctx.triple.q),
            r: exp64(ctx.triple.r),
            omega: Complex::new(ctx.omega.re.to_f64_lossy(), ctx.omega.im.to_f64_lossy()),
            test_fn: ctx.test_fn.to_string(),
            lhs,
            rhs,
            constant: constant.to_f64_lossy(),
            margin: rhs - lhs,
            pass: lhs <= rhs * (1.0 + RHS_SLACK),
        }
    }

    pub fn theta(&self) -> f64 {
        self.omega.arg()
    }
}

/// `Σ_{|α|=m} ‖[x^α, e^{ωΔ}]φ‖_p` against `A_{m,r}(θ)` times the weighted norms of `φ`.
pub fn verify_commutator_estimate<T: Real>(
    m: u32,
    triple: ExponentTriple<T>,
    omega: &ComplexParam<T>,
    phi: &GridFunction<T>,
    test_fn: &str,
) -> Result<EstimateReport> {
    let dim = phi.dim();
    let constant = constant_a(dim, m, triple.r, omega.theta())?;
    let mut lhs = T::zero();
    for alpha in enumerate_level(dim, m) {
        lhs += lp_norm(&commutator_direct(&alpha, omega, phi, Method::Fourier)?, triple.p);
    }
    let weighted = lp_norm(&weight_multiply(phi, &Weight::Radial(m - 1))?, triple.q);
    let norm = lp_norm(phi, triple.q);
    let rhs = commutator_rhs(constant, dim, m, &triple, omega.abs(), weighted, norm);
    let ctx = ReportContext {
        kind: "commutator",
        dim,
        m,
        triple,
        omega: omega.value(),
        test_fn,
    };
    Ok(EstimateReport::new(&ctx, lhs, rhs, constant))
}

/// `‖[|x|^m, e^{ωΔ}]φ‖_p` against `Ã_{m,r}(θ)`.
pub fn verify_radial_estimate<T: Real>(
    m: u32,
    triple: ExponentTriple<T>,
    omega: &ComplexParam<T>,
    phi: &GridFunction<T>,
    test_fn: &str,
) -> Result<EstimateReport> {
    let dim = phi.dim();
    let constant = constant_a_tilde(dim, m, triple.r, omega.theta())?;
    let weight = Weight::Radial(m);
    let w = omega.value();
    let comm = weight_multiply(&apply_fourier(phi, w)?, &weight)?
        .try_sub(&apply_fourier(&weight_multiply(phi, &weight)?, w)?)?;
    let lhs = lp_norm(&comm, triple.p);
    let weighted = lp_norm(&weight_multiply(phi, &Weight::Radial(m - 1))?, triple.q);
    let norm = lp_norm(phi, triple.q);
    let rhs = commutator_rhs(constant, dim, m, &triple, omega.abs(), weighted, norm);
    let ctx = ReportContext {
        kind: "radial",
        dim,
        m,
        triple,
        omega: w,
        test_fn,
    };
    Ok(EstimateReport::new(&ctx, lhs, rhs, constant))
}

/// A bounded weight with an analytic bound on `‖∇η‖_∞`.
#[derive(Clone, Debug)]
pub struct LipschitzWeight<T: Real> {
    pub name: String,
    pub samples: GridFunction<T>,
    pub gradient_bound: T,
}

/// `‖[η, e^{ωΔ}]φ‖_p ≤ A_{1,r}(θ)|ω|^{−(n/2)(1/q−1/p)+1/2}‖∇η‖_∞‖φ‖_q`.
pub fn verify_lipschitz_commutator<T: Real>(
    eta: &LipschitzWeight<T>,
    triple: ExponentTriple<T>,
    omega: &ComplexParam<T>,
    phi: &GridFunction<T>,
    test_fn: &str,
) -> Result<EstimateReport> {
    let dim = phi.dim();
    let constant = constant_a(dim, 1, triple.r, omega.theta())?;
    let w = omega.value();
    let comm = eta
        .samples
        .pointwise_mul(&apply_fourier(phi, w)?)?
        .try_sub(&apply_fourier(&eta.samples.pointwise_mul(phi)?, w)?)?;
    let lhs = lp_norm(&comm, triple.p);
    let power = T::lit(0.5) - triple.decay_exponent(dim);
    let rhs = constant * omega.abs().powf(power) * eta.gradient_bound * lp_norm(phi, triple.q);
    let label = format!("lipschitz:{}", eta.name);
    let ctx = ReportContext {
        kind: &label,
        dim,
        m: 1,
        triple,
        omega: w,
        test_fn,
    };
    Ok(EstimateReport::new(&ctx, lhs, rhs, constant))
}

/// `‖∂^α e^{ωΔ}φ‖_p ≤ |ω|^{−(n/2)(1/q−1/p)−|α|/2}‖∂^αG_{e^{iθ}}‖_r‖φ‖_q`,
/// with the kernel norm by quadrature on the same grid.
pub fn verify_smoothing<T: Real>(
    alpha: &MultiIndex,
    triple: ExponentTriple<T>,
    omega: &ComplexParam<T>,
    phi: &GridFunction<T>,
    test_fn: &str,
) -> Result<EstimateReport> {
    let dim = phi.dim();
    let w = omega.value();
    let lhs = lp_norm(&semigroup_derivative(phi, w, alpha)?, triple.p);
    let unit = omega.unit().value();
    let dg = gaussian_derivative_grid(*phi.shape(), alpha, unit)?;
    let constant = lp_norm(&dg, triple.r);
    let power = -triple.decay_exponent(dim) - T::from_count(alpha.order() as usize) * T::lit(0.5);
    let rhs = omega.abs().powf(power) * constant * lp_norm(phi, triple.q);
    let ctx = ReportContext {
        kind: "smoothing",
        dim,
        m: alpha.order(),
        triple,
        omega: w,
        test_fn,
    };
    Ok(EstimateReport::new(&ctx, lhs, rhs, constant))
}

/// Samples of `∂^αG_ω`.
pub fn gaussian_derivative_grid<T: Real>(
    shape: GridShape<T>,
    alpha: &MultiIndex,
    omega: Complex<T>,
) -> Result<GridFunction<T>> {
    if alpha.dim() != shape.dim() {
        return Err(Error::DimensionMismatch {
            expected: shape.dim(),
            found: alpha.dim(),
        });
    }
    let g = GaussianDerivative::new(alpha, omega)?;
    let out = GridFunction::from_fn(shape, |x| {
        g.eval(x).unwrap_or_else(|_| Complex::new(T::nan(), T::nan()))
    });
    GridFunction::new(shape, out.into_samples())
}

/// `‖|x|^kφ‖_q ≤ ‖|x|^{m−1}φ‖_q^{k/(m−1)} ‖φ‖_q^{1−k/(m−1)}` for `0 ≤ k ≤ m−1`.
pub fn holder_interpolation_check<T: Real>(
    phi: &GridFunction<T>,
    m: u32,
    k: u32,
    q: Exponent<T>,
    test_fn: &str,
) -> Result<EstimateReport> {
    if m < 2 || k > m - 1 {
        return Err(Error::InvalidParameter(format!(
            "interpolation needs m ≥ 2 and k ≤ m − 1, got m = {m}, k = {k}"
        )));
    }
    let lhs = lp_norm(&weight_multiply(phi, &Weight::Radial(k))?, q);
    let top = lp_norm(&weight_multiply(phi, &Weight::Radial(m - 1))?, q);
    let base = lp_norm(phi, q);
    let t = T::from_count(k as usize) / T::from_count((m - 1) as usize);
    let rhs = top.powf(t) * base.powf(T::one() - t);
    let triple = ExponentTriple { p: q, q, r: Exponent::one() };
    let ctx = ReportContext {
        kind: "holder",
        dim: phi.dim(),
        m,
        triple,
        omega: Complex::new(T::one(), T::zero()),
        test_fn,
    };
    Ok(EstimateReport::new(&ctx, lhs, rhs, T::one()))
}

/// `‖x^βG_{e^{iθ}}‖_r ≤ 2^{n/2}‖G_{2e^{iθ}}‖_r · sup_ρ ρ^{|β|}e^{−ρ² cos θ/8}`.
pub fn kernel_chain_check<T: Real>(
    shape: GridShape<T>,
    beta: &MultiIndex,
    theta: T,
    r: Exponent<T>,
) -> Result<EstimateReport> {
    let dim = shape.dim();
    let unit = ComplexParam::new(Complex::from_polar(T::one(), theta))?;
    let lhs = weighted_kernel_norm(shape, &unit, beta, r)?;
    let doubled = unit.scaled(T::lit(2.0))?;
    let constant = sup_gaussian_moment(beta.order(), theta)?;
    let rhs = T::lit(2.0).powf(T::from_count(dim) * T::lit(0.5))
        * gaussian_kernel_norm(dim, &doubled, r)
        * constant;
    let triple = ExponentTriple { p: r, q: Exponent::one(), r };
    let ctx = ReportContext {
        kind: "kernel-chain",
        dim,
        m: beta.order(),
        triple,
        omega: unit.value(),
        test_fn: "kernel",
    };
    Ok(EstimateReport::new(&ctx, lhs, rhs, constant))
}

/// Exponent `−(n/2)(1 − 1/r) + k/2` of `|ω|` in `‖x^βG_ω‖_r = |ω|^{·}‖x^βG_{e^{iθ}}‖_r`.
pub fn kernel_scaling_exponent<T: Real>(dim: usize, k: u32, r: Exponent<T>) -> T {
    let half = T::lit(0.5);
    -T::from_count(dim) * half * (T::one() - r.reciprocal()) + T::from_count(k as usize) * half
}
