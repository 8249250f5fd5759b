//! Multi-variable Hermite polynomials with a complex parameter `ω`.
//!
//! Two flavors are carried explicitly:
//!
//! * [`Flavor::Standard`], `𝑯_{ω,α}(x) = (−1)^{|α|} e^{|x|²/ω} ∂^α e^{−|x|²/ω}`;
//! * [`Flavor::HalfArgument`], `𝒉_{ω,α}(x) = 𝑯_{ω,α}(x/2)`, the flavor that
//!   appears in derivatives of the Gaussian kernel:
//!   `∂^α G_ω = (−2)^{−|α|} 𝒉_{ω,α} G_ω`.
//!
//! Coefficients are [`LaurentPoly`] values in `ω` with big-integer
//! coefficients, so every identity in this module can be checked exactly.

mod laurent;

pub use laurent::LaurentPoly;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multiindex::{enumerate_half_dominated, MultiIndex};
use crate::scalar::{pairwise_sum, Real};
use crate::semigroup::kernel_value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `𝑯_{ω,α}`, argument `x`.
    Standard,
    /// `𝒉_{ω,α}(x) = 𝑯_{ω,α}(x/2)`.
    HalfArgument,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Standard => "H",
            Flavor::HalfArgument => "h",
        })
    }
}

impl FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "H" | "standard" => Ok(Flavor::Standard),
            "h" | "half" => Ok(Flavor::HalfArgument),
            other => Err(Error::Parse(format!("unknown Hermite flavor '{other}'"))),
        }
    }
}

/// Polynomial in `x ∈ R^n` whose coefficients are Laurent polynomials in `ω`.
#[derive(Clone, PartialEq, Eq)]
pub struct HermitePoly {
    dim: usize,
    flavor: Flavor,
    coeffs: BTreeMap<MultiIndex, LaurentPoly>,
}

impl HermitePoly {
    pub fn zero(dim: usize, flavor: Flavor) -> Self {
        Self {
            dim,
            flavor,
            coeffs: BTreeMap::new(),
        }
    }

    /// The single monomial `x^β`.
    pub fn monomial(beta: &MultiIndex, flavor: Flavor) -> Self {
        let mut p = Self::zero(beta.dim(), flavor);
        p.coeffs.insert(beta.clone(), LaurentPoly::one());
        p
    }

    /// Closed form
    /// `Σ_{2β≤α} (−1)^{|β|} α!/(β!(α−2β)!) ω^{−|α−β|} (c·x)^{α−2β}`
    /// with `c = 2` for [`Flavor::Standard`] and `c = 1` for [`Flavor::HalfArgument`].
    pub fn closed_form(alpha: &MultiIndex, flavor: Flavor) -> Self {
        let mut p = Self::zero(alpha.dim(), flavor);
        let alpha_fact = BigInt::from(alpha.factorial());
        for beta in enumerate_half_dominated(alpha) {
            let power = alpha
                .sub_checked(&beta.scale(2))
                .expect("same dimension")
                .expect("2β ≤ α");
            let denom = BigInt::from(beta.factorial() * power.factorial());
            let mut c = &alpha_fact / denom;
            if beta.order() % 2 == 1 {
                c = -c;
            }
            if flavor == Flavor::Standard {
                c <<= power.order() as usize;
            }
            let exponent = -((alpha.order() - beta.order()) as i32);
            p.add_term(power, LaurentPoly::monomial(c, exponent));
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, beta: &MultiIndex) -> LaurentPoly {
        self.coeffs.get(beta).cloned().unwrap_or_default()
    }

    /// Nonzero `(β, coefficient)` pairs in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &LaurentPoly)> {
        self.coeffs.iter()
    }

    fn add_term(&mut self, beta: MultiIndex, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let merged = match self.coeffs.remove(&beta) {
            Some(old) => &old + &c,
            None => c,
        };
        if !merged.is_zero() {
            self.coeffs.insert(beta, merged);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (beta, c) in &other.coeffs {
            out.add_term(beta.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&LaurentPoly::constant(-1)))
    }

    /// Multiplies every coefficient by a Laurent polynomial in `ω`.
    pub fn scale(&self, s: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.dim, self.flavor);
        for (beta, c) in &self.coeffs {
            out.add_term(beta.clone(), c * s);
        }
        out
    }

    /// `x_j · P` (0-based axis).
    pub fn mul_coordinate(&self, axis: usize) -> Self {
        let e = MultiIndex::unit(self.dim, axis);
        Self {
            dim: self.dim,
            flavor: self.flavor,
            coeffs: self
                .coeffs
                .iter()
                .map(|(b, c)| (b.checked_add(&e).expect("same dimension"), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `ω ↦ 1/ω` in every coefficient.
    pub fn invert_parameter(&self) -> Self {
        Self {
            dim: self.dim,
            flavor: self.flavor,
            coeffs: self
                .coeffs
                .iter()
                .map(|(b, c)| (b.clone(), c.invert_variable()))
                .collect(),
        }
    }

    /// `𝑯 ↦ 𝒉`: substitutes `x ↦ x/2`, dividing the coefficient of `x^β` by
    /// `2^{|β|}`. Fails unless every division is exact.
    pub fn to_half_argument(&self) -> Result<Self> {
        if self.flavor != Flavor::Standard {
            return Err(Error::FlavorMismatch);
        }
        let mut out = Self::zero(self.dim, Flavor::HalfArgument);
        for (beta, c) in &self.coeffs {
            let d = BigInt::one() << beta.order() as usize;
            let c = c.div_exact(&d).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "coefficient of x^{beta} is not divisible by 2^{}",
                    beta.order()
                ))
            })?;
            out.add_term(beta.clone(), c);
        }
        Ok(out)
    }

    /// `𝒉 ↦ 𝑯`: substitutes `x ↦ 2x`.
    pub fn to_standard(&self) -> Result<Self> {
        if self.flavor != Flavor::HalfArgument {
            return Err(Error::FlavorMismatch);
        }
        let mut out = Self::zero(self.dim, Flavor::Standard);
        for (beta, c) in &self.coeffs {
            let m = BigInt::one() << beta.order() as usize;
            out.add_term(beta.clone(), c.scale(&m));
        }
        Ok(out)
    }

    /// Fixes `ω` numerically, keeping the monomial structure.
    pub fn numeric<T: Real>(&self, omega: Complex<T>) -> NumericPoly<T> {
        NumericPoly {
            terms: self
                .coeffs
                .iter()
                .map(|(b, c)| (b.clone(), c.eval(omega)))
                .collect(),
        }
    }

    pub fn eval<T: Real>(&self, omega: Complex<T>, x: &[T]) -> Complex<T> {
        self.numeric(omega).eval(x)
    }
}

impl fmt::Display for HermitePoly {
    /// One line per monomial: `beta<TAB>laurent`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (beta, c) in &self.coeffs {
            writeln!(f, "{beta}\t{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HermitePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitePoly[{}; n={}] {{", self.flavor, self.dim)?;
        for (beta, c) in &self.coeffs {
            write!(f, " {beta:?}: {c};")?;
        }
        f.write_str(" }")
    }
}

/// Polynomial in `x` with complex coefficients (parameter already substituted).
#[derive(Clone, Debug)]
pub struct NumericPoly<T> {
    terms: Vec<(MultiIndex, Complex<T>)>,
}

impl<T: Real> NumericPoly<T> {
    /// Direct monomial sum with pairwise accumulation.
    pub fn eval(&self, x: &[T]) -> Complex<T> {
        let parts: Vec<Complex<T>> = self
            .terms
            .iter()
            .map(|(b, c)| *c * b.monomial(x))
            .collect();
        pairwise_sum(&parts)
    }
}

/// Both sides of the three-term recurrence for one `(α, j)`.
#[derive(Clone, Debug)]
pub struct RecurrenceIdentity {
    pub lhs: HermitePoly,
    pub rhs: HermitePoly,
}

impl RecurrenceIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The recurrence
/// `x_j 𝒉_α = ω 𝒉_{α+e_j} + 2α_j 𝒉_{α−e_j}` (the last term absent when `α_j = 0`),
/// or `2x_j 𝑯_α = ω 𝑯_{α+e_j} + 2α_j 𝑯_{α−e_j}` for the standard flavor,
/// with both sides built from closed forms.
pub fn hermite_recurrence(alpha: &MultiIndex, axis: usize, flavor: Flavor) -> RecurrenceIdentity {
    let base = HermitePoly::closed_form(alpha, flavor).mul_coordinate(axis);
    let lhs = match flavor {
        Flavor::HalfArgument => base,
        Flavor::Standard => base.scale(&LaurentPoly::constant(2)),
    };
    let up = alpha.with_axis_added(axis, 1).expect("raising never underflows");
    let mut rhs = HermitePoly::closed_form(&up, flavor).scale(&LaurentPoly::monomial(1, 1));
    if let Some(down) = alpha.with_axis_added(axis, -1) {
        let c = LaurentPoly::constant(2 * alpha.get(axis) as i64);
        rhs = rhs
            .try_add(&HermitePoly::closed_form(&down, flavor).scale(&c))
            .expect("same flavor and dimension");
    }
    RecurrenceIdentity { lhs, rhs }
}

/// Builds `𝒉_{ω,α}` (or `𝑯_{ω,α}`) from `P_0 ≡ 1` by the recurrence alone,
/// solving it for the raised index:
/// `P_{α+e_j} = ω⁻¹ (c·x_j P_α − 2α_j P_{α−e_j})`.
pub fn generate_by_recurrence(alpha: &MultiIndex, flavor: Flavor) -> HermitePoly {
    let mut memo = HashMap::new();
    generate_memo(alpha, flavor, &mut memo)
}

fn generate_memo(
    alpha: &MultiIndex,
    flavor: Flavor,
    memo: &mut HashMap<MultiIndex, HermitePoly>,
) -> HermitePoly {
    if let Some(p) = memo.get(alpha) {
        return p.clone();
    }
    let n = alpha.dim();
    let out = match (0..n).find(|&j| alpha.get(j) > 0) {
        None => HermitePoly::monomial(&MultiIndex::zero(n), flavor),
        Some(j) => {
            let lower = alpha.with_axis_added(j, -1).expect("α_j ≥ 1");
            let p_lower = generate_memo(&lower, flavor, memo);
            let mut acc = p_lower.mul_coordinate(j);
            if flavor == Flavor::Standard {
                acc = acc.scale(&LaurentPoly::constant(2));
            }
            if let Some(lower2) = lower.with_axis_added(j, -1) {
                let p2 = generate_memo(&lower2, flavor, memo);
                let c = LaurentPoly::constant(2 * lower.get(j) as i64);
                acc = acc.try_sub(&p2.scale(&c)).expect("same flavor");
            }
            acc.scale(&LaurentPoly::monomial(1, -1))
        }
    };
    memo.insert(alpha.clone(), out.clone());
    out
}

/// Inverse expansion `x^α = Σ_{2β≤α} α!/(β!(α−2β)!) ω^{|α−β|} 𝒉_{ω,α−2β}(x)`;
/// returns the `(β, weight)` pairs.
pub fn monomial_expand(alpha: &MultiIndex) -> Vec<(MultiIndex, LaurentPoly)> {
    let alpha_fact = BigInt::from(alpha.factorial());
    enumerate_half_dominated(alpha)
        .into_iter()
        .map(|beta| {
            let rest = alpha
                .sub_checked(&beta.scale(2))
                .expect("same dimension")
                .expect("2β ≤ α");
            let c = &alpha_fact / BigInt::from(beta.factorial() * rest.factorial());
            let k = (alpha.order() - beta.order()) as i32;
            (beta, LaurentPoly::monomial(c, k))
        })
        .collect()
}

/// Substitutes the closed forms into [`monomial_expand`] and sums; the result
/// must be exactly the single monomial `x^α`.
pub fn reconstruct_monomial(alpha: &MultiIndex) -> HermitePoly {
    let mut acc = HermitePoly::zero(alpha.dim(), Flavor::HalfArgument);
    for (beta, w) in monomial_expand(alpha) {
        let idx = alpha
            .sub_checked(&beta.scale(2))
            .expect("same dimension")
            .expect("2β ≤ α");
        let h = HermitePoly::closed_form(&idx, Flavor::HalfArgument).scale(&w);
        acc = acc.try_add(&h).expect("same flavor");
    }
    acc
}

/// `(∂^α G_ω)(x) = (−2)^{−|α|} 𝒉_{ω,α}(x) G_ω(x)`, with `𝒉` evaluated from its
/// exact coefficients.
pub fn gaussian_derivative<T: Real>(
    alpha: &MultiIndex,
    omega: Complex<T>,
    x: &[T],
) -> Result<Complex<T>> {
    GaussianDerivative::new(alpha, omega)?.eval(x)
}

/// [`gaussian_derivative`] with the Hermite coefficients fixed once, for
/// sampling on grids.
#[derive(Clone, Debug)]
pub struct GaussianDerivative<T> {
    dim: usize,
    omega: Complex<T>,
    hermite: NumericPoly<T>,
    prefactor: T,
}

impl<T: Real> GaussianDerivative<T> {
    pub fn new(alpha: &MultiIndex, omega: Complex<T>) -> Result<Self> {
        if omega.is_zero() || omega.re < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "Gaussian derivative needs ω ≠ 0 with re ω ≥ 0, got {omega}"
            )));
        }
        let hermite = HermitePoly::closed_form(alpha, Flavor::HalfArgument).numeric(omega);
        let prefactor = T::lit(-2.0).powi(-(alpha.order() as i32));
        Ok(Self {
            dim: alpha.dim(),
            omega,
            hermite,
            prefactor,
        })
    }

    pub fn eval(&self, x: &[T]) -> Result<Complex<T>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        let g = kernel_value(self.omega, x)?;
        Ok(self.hermite.eval(x) * g * self.prefactor)
    }
}
