//! The commutator `[x^α, e^{ωΔ}]` and its closed-form operator `R_α(ω)`.
//!
//! Four evaluators are exposed and meant to be cross-checked:
//!
//! * [`commutator_direct`]: `x^α e^{ωΔ}φ − e^{ωΔ}(x^αφ)` by brute force;
//! * [`evaluate_r_expansion`]: the finite sum of `ω^{|κ|}(−2ω∂)^{β−2κ} e^{ωΔ}(x^γφ)`
//!   terms, each applied as a Fourier multiplier;
//! * [`evaluate_r_convolution`]: `Σ α!/(β!γ!) (x^βG_ω) ∗ (x^γφ)` by quadrature, no DFT;
//! * [`evaluate_r_fourier_hermite`]: the same sum with the symbol
//!   `(−i)^{|β|} 𝑯_{1/ω,β}(ξ) e^{−ω|ξ|²}`.

use num_bigint::BigUint;
use num_complex::Complex;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermite::{Flavor, HermitePoly};
use crate::multiindex::{enumerate_half_dominated, MultiIndex};
use crate::scalar::Real;
use crate::semigroup::{
    apply_direct, apply_fourier, frequencies, relative_l2_error, weight_multiply,
    weighted_kernel_convolution, ComplexParam, GridFunction, Spectrum, Weight,
};

/// Relative L² tolerance for every identity check.
pub const IDENTITY_TOLERANCE: f64 = 1e-6;

/// One summand `c·ω^{|κ|}(−2ω∂)^δ e^{ωΔ}(x^γφ)` of `R_α(ω)φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorTerm {
    pub gamma: MultiIndex,
    pub kappa: MultiIndex,
    /// `δ = β − 2κ`.
    pub delta: MultiIndex,
    /// `α!/(γ!κ!δ!)`.
    pub coefficient: BigUint,
}

impl CommutatorTerm {
    /// Total power of `ω`: `|κ| + |δ|`.
    pub fn omega_power(&self) -> u32 {
        self.kappa.order() + self.delta.order()
    }

    /// `c·ω^{|κ|}·(−2ω)^{|δ|}` as a number.
    pub fn factor<T: Real>(&self, omega: Complex<T>) -> Complex<T> {
        let c = T::lit(self.coefficient.to_f64().unwrap_or(f64::INFINITY));
        let mut f = Complex::new(c, T::zero());
        let k = self.kappa.order();
        if k > 0 {
            f = f * omega.powu(k);
        }
        let d = self.delta.order();
        if d > 0 {
            f = f * (omega * T::lit(-2.0)).powu(d);
        }
        f
    }
}

/// Every term of `R_α(ω)`, ordered by `β` then `κ`.
pub fn expand_r_terms(alpha: &MultiIndex) -> Result<Vec<CommutatorTerm>> {
    if alpha.is_zero() {
        return Err(Error::InvalidParameter(
            "R_α is defined for |α| ≥ 1".into(),
        ));
    }
    let alpha_fact = alpha.factorial();
    let mut out = Vec::new();
    for (beta, gamma) in alpha.splits() {
        if beta.is_zero() {
            continue;
        }
        let gamma_fact = gamma.factorial();
        for kappa in enumerate_half_dominated(&beta) {
            let delta = beta
                .sub_checked(&kappa.scale(2))?
                .expect("2κ ≤ β by construction");
            let coefficient =
                &alpha_fact / (&gamma_fact * kappa.factorial() * delta.factorial());
            out.push(CommutatorTerm {
                gamma: gamma.clone(),
                kappa,
                delta,
                coefficient,
            });
        }
    }
    Ok(out)
}

/// `Σ` of all term coefficients, i.e. the expansion evaluated at `ω = 1`
/// with signs and powers of `−2` stripped.
pub fn coefficient_checksum(alpha: &MultiIndex) -> Result<BigUint> {
    Ok(expand_r_terms(alpha)?
        .into_iter()
        .map(|t| t.coefficient)
        .sum())
}

/// How `e^{ωΔ}` is applied inside [`commutator_direct`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Fourier,
    Quadrature,
}

fn check_dim<T: Real>(alpha: &MultiIndex, phi: &GridFunction<T>) -> Result<()> {
    if alpha.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            found: alpha.dim(),
        });
    }
    Ok(())
}

/// `x^α e^{ωΔ}φ − e^{ωΔ}(x^αφ)`.
pub fn commutator_direct<T: Real>(
    alpha: &MultiIndex,
    omega: &ComplexParam<T>,
    phi: &GridFunction<T>,
    method: Method,
) -> Result<GridFunction<T>> {
    check_dim(alpha, phi)?;
    let apply = |f: &GridFunction<T>| match method {
        Method::Fourier => apply_fourier(f, omega.value()),
        Method::Quadrature => apply_direct(f, omega),
    };
    let weight = Weight::Monomial(alpha.clone());
    let left = weight_multiply(&apply(phi)?, &weight)?;
    let right = apply(&weight_multiply(phi, &weight)?)?;
    left.try_sub(&right)
}

/// Sums `terms` in the given order; the first term seeds the accumulator.
fn ordered_sum<T: Real>(
    parts: Vec<GridFunction<T>>,
    shape_of: &GridFunction<T>,
) -> Result<GridFunction<T>> {
    let mut iter = parts.into_iter();
    let mut acc = match iter.next() {
        Some(first) => first,
        None => return Ok(GridFunction::zeros(*shape_of.shape())),
    };
    for p in iter {
        acc.accumulate(&p)?;
    }
    Ok(acc)
}

/// `R_α(ω)φ` from the derivative expansion, each term a Fourier multiplier.
pub fn evaluate_r_expansion<T: Real>(
    alpha: &MultiIndex,
    omega: &ComplexParam<T>,
    phi: &GridFunction<T>,
) -> Result<GridFunction<T>> {
    check_dim(alpha, phi)?;
    let w = omega.value();
    let terms = expand_r_terms(alpha)?;
    let mut gammas: Vec<MultiIndex> = terms.iter().map(|t| t.gamma.clone()).collect();
    gammas.sort();
    gammas.dedup();
    let spectra: Vec<(MultiIndex, Spectrum<T>)> = gammas
        .into_par_iter()
        .map(|g| {
            let weighted = if g.is_zero() {
                phi.clone()
            } else {
                weight_multiply(phi, &Weight::Monomial(g.clone()))?
            };
            Ok((g, Spectrum::forward(&weighted)))
        })
        .collect::<Result<_>>()?;
    let parts: Vec<GridFunction<T>> = terms
        .par_iter()
        .map(|t| {
            let spec = &spectra
                .iter()
                .find(|(g, _)| *g == t.gamma)
                .expect("spectrum for every γ")
                .1;
            Ok(spec.semigroup_derivative(w, &t.delta)?.scale(t.factor(w)))
        })
        .collect::<Result<_>>()?;
    ordered_sum(parts, phi)
}

/// `α!/(β!γ!)` as a float.
fn split_coefficient<T: Real>(alpha: &MultiIndex, beta: &MultiIndex, gamma: &MultiIndex) -> T {
    let c = alpha.factorial() / (beta.factorial() * gamma.factorial());
    T::lit(c.to_f64().unwrap_or(f64::INFINITY))
}

/// `R_α(ω)φ = Σ_{β+γ=α, β≠0} α!/(β!γ!) (x^βG_ω) ∗ (x^γφ)` by direct quadrature.
pub fn evaluate_r_convolution<T: Real>(
    alpha: &MultiIndex,
    omega: &ComplexParam<T>,
    phi: &GridFunction<T>,
) -> Result<GridFunction<T>> {
    check_dim(alpha, phi)?;
    if alpha.is_zero() {
        return Err(Error::InvalidParameter("R_α is defined for |α| ≥ 1".into()));
    }
    let splits: Vec<_> = alpha.splits().into_iter().filter(|(b, _)| !b.is_zero()).collect();
    let parts: Vec<GridFunction<T>> = splits
        .par_iter()
        .map(|(beta, gamma)| {
            let weighted = weight_multiply(phi, &Weight::Monomial(gamma.clone()))?;
            let conv = weighted_kernel_convolution(&weighted, omega, beta)?;
            let c = split_coefficient::<T>(alpha, beta, gamma);
            Ok(conv.scale(Complex::new(c, T::zero())))
        })
        .collect::<Result<_>>()?;
    ordered_sum(parts, phi)
}

/// Per-axis table `(−i)^b 𝑯_{1/ω,b}(ξ) e^{−ωξ²}`; odd `b` drops the Nyquist mode.
fn hermite_axis_symbol<T: Real>(xi: &[T], omega: Complex<T>, b: u32) -> Result<Vec<Complex<T>>> {
    let poly = HermitePoly::closed_form(&MultiIndex::new(vec![b])?, Flavor::Standard)
        .invert_parameter()
        .numeric(omega);
    let phase = Complex::new(T::zero(), -T::one()).powu(b);
    let nyquist = xi.len() / 2;
    Ok(xi
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            if b % 2 == 1 && k == nyquist {
                return Complex::new(T::zero(), T::zero());
            }
            phase * poly.eval(&[x]) * (-omega * (x * x)).exp()
        })
        .collect())
}

/// `R_α(ω)φ` with each `β`-summand applied through the Hermite symbol.
pub fn evaluate_r_fourier_hermite<T: Real>(
    alpha: &MultiIndex,
    omega: &ComplexParam<T>,
    phi: &GridFunction<T>,
) -> Result<GridFunction<T>> {
    check_dim(alpha, phi)?;
    if alpha.is_zero() {
        return Err(Error::InvalidParameter("R_α is defined for |α| ≥ 1".into()));
    }
    let w = omega.value();
    let xi = frequencies(phi.shape());
    let splits: Vec<_> = alpha.splits().into_iter().filter(|(b, _)| !b.is_zero()).collect();
    let parts: Vec<GridFunction<T>> = splits
        .par_iter()
        .map(|(beta, gamma)| {
            let weighted = weight_multiply(phi, &Weight::Monomial(gamma.clone()))?;
            let tables = beta
                .components()
                .iter()
                .map(|&b| hermite_axis_symbol(&xi, w, b))
                .collect::<Result<Vec<_>>>()?;
            let out = Spectrum::forward(&weighted).multiply_separable(&tables)?.inverse();
            let c = split_coefficient::<T>(alpha, beta, gamma);
            Ok(out.scale(Complex::new(c, T::zero())))
        })
        .collect::<Result<_>>()?;
    ordered_sum(parts, phi)
}

/// Outcome of comparing two evaluations of the same quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub alpha: MultiIndex,
    pub omega: Complex<f64>,
    pub pair: String,
    pub rel_l2_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new<T: Real>(
        alpha: &MultiIndex,
        omega: &ComplexParam<T>,
        pair: impl Into<String>,
        value: &GridFunction<T>,
        reference: &GridFunction<T>,
    ) -> Result<Self> {
        let err = relative_l2_error(value, reference)?.to_f64_lossy();
        let w = omega.value();
        Ok(Self {
            alpha: alpha.clone(),
            omega: Complex::new(w.re.to_f64_lossy(), w.im.to_f64_lossy()),
            pair: pair.into(),
            rel_l2_err: err,
            tolerance: IDENTITY_TOLERANCE,
            pass: err <= IDENTITY_TOLERANCE,
        })
    }
}

/// Cross-checks all evaluators against the direct commutator.
pub fn verify_identity<T: Real>(
    alpha: &MultiIndex,
    omega: &ComplexParam<T>,
    phi: &GridFunction<T>,
) -> Result<Vec<IdentityReport>> {
    let direct = commutator_direct(alpha, omega, phi, Method::Fourier)?;
    let expansion = evaluate_r_expansion(alpha, omega, phi)?;
    let convolution = evaluate_r_convolution(alpha, omega, phi)?;
    let hermite = evaluate_r_fourier_hermite(alpha, omega, phi)?;
    Ok(vec![
        IdentityReport::new(alpha, omega, "direct-expansion", &expansion, &direct)?,
        IdentityReport::new(alpha, omega, "direct-convolution", &convolution, &direct)?,
        IdentityReport::new(alpha, omega, "expansion-convolution", &convolution, &expansion)?,
        IdentityReport::new(alpha, omega, "expansion-hermite", &hermite, &expansion)?,
    ])
}

/// `x_j R_α(ω)φ = R_{α+e_j}(ω)φ − R_{e_j}(ω)(x^αφ)`, both sides by quadrature.
pub fn shift_identity<T: Real>(
    alpha: &MultiIndex,
    axis: usize,
    omega: &ComplexParam<T>,
    phi: &GridFunction<T>,
) -> Result<IdentityReport> {
    check_dim(alpha, phi)?;
    if axis >= alpha.dim() {
        return Err(Error::InvalidParameter(format!(
            "axis {axis} out of range for dimension {}",
            alpha.dim()
        )));
    }
    let e = MultiIndex::unit(alpha.dim(), axis);
    let lhs = weight_multiply(
        &evaluate_r_convolution(alpha, omega, phi)?,
        &Weight::Monomial(e.clone()),
    )?;
    let raised = alpha.checked_add(&e)?;
    let weighted = weight_multiply(phi, &Weight::Monomial(alpha.clone()))?;
    let rhs = evaluate_r_convolution(&raised, omega, phi)?
        .try_sub(&evaluate_r_convolution(&e, omega, &weighted)?)?;
    IdentityReport::new(alpha, omega, format!("shift-axis{}", axis + 1), &rhs, &lhs)
}

/// Whether every sample is exactly zero.
pub fn is_identically_zero<T: Real>(phi: &GridFunction<T>) -> bool {
    phi.samples().iter().all(|z| z.is_zero())
}
