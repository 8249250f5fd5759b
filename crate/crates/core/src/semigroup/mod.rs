//! The Gauss-Weierstrass semigroup `e^{ωΔ}` on uniform grids.
//!
//! Two evaluators are provided: a Fourier multiplier ([`apply_fourier`]) and a
//! trapezoid-rule convolution with the exact kernel ([`apply_direct`]).

mod grid;
pub mod io;
mod quadrature;
mod spectral;

use num_complex::Complex;

pub use grid::{relative_l2_error, GridFunction, GridShape};
pub use quadrature::{apply_direct, weighted_kernel_convolution};
pub use spectral::{
    apply_fourier, frequencies, semigroup_derivative, spectral_derivative, HeatPropagator,
    Spectrum,
};

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::scalar::{Exponent, Real};

/// Complex time parameter `ω` with `re ω > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexParam<T> {
    value: Complex<T>,
}

impl<T: Real> ComplexParam<T> {
    pub fn new(value: Complex<T>) -> Result<Self> {
        if !(value.re > T::zero()) || !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::InvalidParameter(format!("need re ω > 0, got {value}")));
        }
        Ok(Self { value })
    }

    /// Admits the boundary `re ω = 0`, `ω ≠ 0`; kernel evaluation only.
    pub fn new_closed(value: Complex<T>) -> Result<Self> {
        if value.re.is_zero() && value.im.is_zero() {
            return Err(Error::InvalidParameter("ω must be non-zero".into()));
        }
        if !(value.re >= T::zero()) || !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::InvalidParameter(format!("need re ω ≥ 0, got {value}")));
        }
        Ok(Self { value })
    }

    pub fn real(w: T) -> Result<Self> {
        Self::new(Complex::new(w, T::zero()))
    }

    pub fn value(&self) -> Complex<T> {
        self.value
    }

    pub fn abs(&self) -> T {
        self.value.norm()
    }

    /// `θ = arg ω`.
    pub fn theta(&self) -> T {
        self.value.arg()
    }

    /// `e^{iθ} = ω/|ω|`.
    pub fn unit(&self) -> Self {
        Self {
            value: Complex::from_polar(T::one(), self.theta()),
        }
    }

    /// `λω` for real `λ > 0`.
    pub fn scaled(&self, lambda: T) -> Result<Self> {
        Self::new_closed(self.value * lambda)
    }
}

/// `(4πω)^{−1/2} e^{−s²/(4ω)}`; the kernel is the product of these over axes.
pub(crate) fn kernel_axis_factor<T: Real>(omega: Complex<T>, s: T) -> Complex<T> {
    let half = T::lit(0.5);
    let four_pi = T::lit(4.0) * T::PI();
    let pre = Complex::new(-half * (four_pi * omega.norm()).ln(), -half * omega.arg()).exp();
    pre * (-Complex::new(s * s, T::zero()) / (omega * T::lit(4.0))).exp()
}

/// `G_ω(x) = (4πω)^{−n/2} exp(−|x|²/(4ω))`, principal branch, `re ω ≥ 0`, `ω ≠ 0`.
pub fn kernel_value<T: Real>(omega: Complex<T>, x: &[T]) -> Result<Complex<T>> {
    let w = ComplexParam::new_closed(omega)?;
    Ok(kernel(&w, x))
}

pub fn kernel<T: Real>(omega: &ComplexParam<T>, x: &[T]) -> Complex<T> {
    let w = omega.value();
    let n = T::from_count(x.len());
    let half_n = n * T::lit(0.5);
    let four_pi = T::lit(4.0) * T::PI();
    let pre = Complex::new(-half_n * (four_pi * w.norm()).ln(), -half_n * w.arg()).exp();
    let r2: T = x.iter().map(|&xi| xi * xi).sum();
    pre * (-Complex::new(r2, T::zero()) / (w * T::lit(4.0))).exp()
}

/// Samples of `G_ω` on a grid.
pub fn gaussian_grid<T: Real>(shape: GridShape<T>, omega: &ComplexParam<T>) -> GridFunction<T> {
    GridFunction::from_fn(shape, |x| kernel(omega, x))
}

/// Discrete `L^p` norm: `(h^n Σ|φ|^p)^{1/p}`, or the grid maximum for `p = ∞`.
pub fn lp_norm<T: Real>(phi: &GridFunction<T>, p: Exponent<T>) -> T {
    let dv = phi.shape().cell_volume();
    let s = phi.samples();
    match p {
        Exponent::Infinity => phi.max_abs(),
        Exponent::Finite(p) if p == T::one() => dv * chunked_sum(s.iter().map(|z| z.norm())),
        Exponent::Finite(p) if p == T::lit(2.0) => {
            (dv * chunked_sum(s.iter().map(|z| z.norm_sqr()))).sqrt()
        }
        Exponent::Finite(p) => {
            // Scale by the maximum to keep |φ|^p representable.
            let m = phi.max_abs();
            if m.is_zero() {
                return T::zero();
            }
            let sum = chunked_sum(s.iter().map(|z| (z.norm() / m).powf(p)));
            m * (dv * sum).powf(p.recip())
        }
    }
}

fn chunked_sum<T: Real>(values: impl Iterator<Item = T>) -> T {
    let v: Vec<T> = values.collect();
    v.chunks(256).map(|c| c.iter().copied().sum::<T>()).sum()
}

/// Pointwise weight applied by [`weight_multiply`].
#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    /// `x^α`.
    Monomial(MultiIndex),
    /// `|x|^m`.
    Radial(u32),
}

pub fn weight_multiply<T: Real>(phi: &GridFunction<T>, weight: &Weight) -> Result<GridFunction<T>> {
    match weight {
        Weight::Monomial(alpha) => {
            if alpha.dim() != phi.dim() {
                return Err(Error::DimensionMismatch {
                    expected: phi.dim(),
                    found: alpha.dim(),
                });
            }
            if alpha.is_zero() {
                return Ok(phi.clone());
            }
            Ok(phi.map_with_point(|x, v| v * alpha.monomial(x)))
        }
        Weight::Radial(m) => {
            let m = *m as i32;
            Ok(phi.map_with_point(|x, v| {
                let r: T = x.iter().map(|&xi| xi * xi).sum::<T>().sqrt();
                v * r.powi(m)
            }))
        }
    }
}

/// Analytic `‖G_ω‖_r = (4π|ω|)^{−n/2} (4π|ω|/(r cos θ))^{n/(2r)}`.
pub fn gaussian_kernel_norm<T: Real>(dim: usize, omega: &ComplexParam<T>, r: Exponent<T>) -> T {
    let half_n = T::from_count(dim) * T::lit(0.5);
    let a = T::lit(4.0) * T::PI() * omega.abs();
    let base = a.powf(-half_n);
    match r {
        Exponent::Infinity => base,
        Exponent::Finite(r) => base * (a / (r * omega.theta().cos())).powf(half_n / r),
    }
}

/// Grid quadrature of `‖x^β G_ω‖_r`.
pub fn weighted_kernel_norm<T: Real>(
    shape: GridShape<T>,
    omega: &ComplexParam<T>,
    beta: &MultiIndex,
    r: Exponent<T>,
) -> Result<T> {
    let g = gaussian_grid(shape, omega);
    Ok(lp_norm(&weight_multiply(&g, &Weight::Monomial(beta.clone()))?, r))
}
