use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::grid::{process_lines, GridFunction, GridShape};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::scalar::Real;

/// Planned forward and inverse transforms for one grid shape.
#[derive(Clone)]
pub(crate) struct FftEngine<T: Real> {
    shape: GridShape<T>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> FftEngine<T> {
    pub(crate) fn new(shape: GridShape<T>) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            shape,
            forward: planner.plan_fft_forward(shape.points()),
            inverse: planner.plan_fft_inverse(shape.points()),
        }
    }

    fn run(&self, data: &mut [Complex<T>], fft: &Arc<dyn Fft<T>>) {
        for axis in 0..self.shape.dim() {
            process_lines(&self.shape, data, axis, |line| fft.process(line));
        }
    }

    pub(crate) fn forward(&self, data: &mut [Complex<T>]) {
        self.run(data, &self.forward);
    }

    /// Inverse transform including the `1/N^n` normalization.
    pub(crate) fn inverse(&self, data: &mut [Complex<T>]) {
        self.run(data, &self.inverse);
        let norm = T::one() / T::from_count(self.shape.len());
        data.par_iter_mut().for_each(|v| *v = *v * norm);
    }
}

/// Discrete frequencies `ξ_k = πk/L` in FFT storage order.
pub fn frequencies<T: Real>(shape: &GridShape<T>) -> Vec<T> {
    let n = shape.points();
    let step = T::PI() / shape.half_width();
    (0..n)
        .map(|k| {
            let signed = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
            T::lit(signed) * step
        })
        .collect()
}

/// Full multiplier `∏_a f_a(ξ_{k_a})` from per-axis tables, row-major.
pub(crate) fn separable_product<T: Real>(factors: &[Vec<Complex<T>>]) -> Vec<Complex<T>> {
    let mut out = vec![Complex::new(T::one(), T::zero())];
    for f in factors {
        out = out
            .iter()
            .flat_map(|&v| f.iter().map(move |&g| v * g))
            .collect();
    }
    out
}

/// Per-axis table of `(iξ)^d e^{−ωξ²}`. The Nyquist mode is dropped for odd `d`.
fn axis_multiplier<T: Real>(xi: &[T], omega: Complex<T>, d: u32) -> Vec<Complex<T>> {
    let nyquist = xi.len() / 2;
    xi.iter()
        .enumerate()
        .map(|(k, &x)| {
            if d % 2 == 1 && k == nyquist {
                return Complex::new(T::zero(), T::zero());
            }
            let heat = (-omega * (x * x)).exp();
            Complex::new(T::zero(), x).powu(d) * heat
        })
        .collect()
}

fn check_omega<T: Real>(omega: Complex<T>) -> Result<()> {
    if !(omega.re >= T::zero()) || !omega.im.is_finite() || !omega.re.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "semigroup parameter needs re ω ≥ 0, got {omega}"
        )));
    }
    Ok(())
}

/// Fourier coefficients of a grid function.
#[derive(Clone)]
pub struct Spectrum<T: Real> {
    shape: GridShape<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Spectrum<T> {
    pub fn forward(phi: &GridFunction<T>) -> Self {
        let shape = *phi.shape();
        let mut coeffs = phi.samples().to_vec();
        FftEngine::new(shape).forward(&mut coeffs);
        Self { shape, coeffs }
    }

    pub fn shape(&self) -> &GridShape<T> {
        &self.shape
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Multiplies by a separable symbol given as one table per axis.
    pub fn multiply_separable(&self, factors: &[Vec<Complex<T>>]) -> Result<Self> {
        if factors.len() != self.shape.dim()
            || factors.iter().any(|f| f.len() != self.shape.points())
        {
            return Err(Error::InvalidGrid("multiplier tables do not match grid".into()));
        }
        let symbol = separable_product(factors);
        let coeffs = self
            .coeffs
            .par_iter()
            .zip(&symbol)
            .map(|(&c, &m)| c * m)
            .collect();
        Ok(Self {
            shape: self.shape,
            coeffs,
        })
    }

    pub fn inverse(mut self) -> GridFunction<T> {
        FftEngine::new(self.shape).inverse(&mut self.coeffs);
        GridFunction::from_parts(self.shape, self.coeffs)
    }

    /// `∂^δ e^{ωΔ}` applied through the symbol `(iξ)^δ e^{−ω|ξ|²}`.
    pub fn semigroup_derivative(
        &self,
        omega: Complex<T>,
        delta: &MultiIndex,
    ) -> Result<GridFunction<T>> {
        check_omega(omega)?;
        if delta.dim() != self.shape.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.shape.dim(),
                found: delta.dim(),
            });
        }
        let xi = frequencies(&self.shape);
        let factors: Vec<_> = delta
            .components()
            .iter()
            .map(|&d| axis_multiplier(&xi, omega, d))
            .collect();
        Ok(self.multiply_separable(&factors)?.inverse())
    }
}

/// `e^{ωΔ}` on a fixed grid with the symbol and transform plans precomputed.
#[derive(Clone)]
pub struct HeatPropagator<T: Real> {
    engine: FftEngine<T>,
    symbol: Vec<Complex<T>>,
}

impl<T: Real> HeatPropagator<T> {
    pub fn new(shape: GridShape<T>, omega: Complex<T>) -> Result<Self> {
        check_omega(omega)?;
        let xi = frequencies(&shape);
        let table = axis_multiplier(&xi, omega, 0);
        let symbol = separable_product(&vec![table; shape.dim()]);
        Ok(Self {
            engine: FftEngine::new(shape),
            symbol,
        })
    }

    pub fn shape(&self) -> &GridShape<T> {
        &self.engine.shape
    }

    /// Multiplies Fourier coefficients by the heat symbol in place.
    pub fn apply_to_coeffs(&self, coeffs: &mut [Complex<T>]) {
        coeffs
            .par_iter_mut()
            .zip(&self.symbol)
            .for_each(|(c, &m)| *c = *c * m);
    }

    pub(crate) fn engine(&self) -> &FftEngine<T> {
        &self.engine
    }

    pub fn apply(&self, phi: &GridFunction<T>) -> Result<GridFunction<T>> {
        if phi.shape() != self.shape() {
            return Err(Error::NotConformable);
        }
        let mut data = phi.samples().to_vec();
        self.engine.forward(&mut data);
        self.apply_to_coeffs(&mut data);
        self.engine.inverse(&mut data);
        Ok(GridFunction::from_parts(*self.shape(), data))
    }
}

/// `e^{ωΔ}φ` through the discrete Fourier multiplier, `re ω ≥ 0`.
pub fn apply_fourier<T: Real>(phi: &GridFunction<T>, omega: Complex<T>) -> Result<GridFunction<T>> {
    HeatPropagator::new(*phi.shape(), omega)?.apply(phi)
}

/// `∂^δ e^{ωΔ}φ`, computed spectrally.
pub fn semigroup_derivative<T: Real>(
    phi: &GridFunction<T>,
    omega: Complex<T>,
    delta: &MultiIndex,
) -> Result<GridFunction<T>> {
    Spectrum::forward(phi).semigroup_derivative(omega, delta)
}

/// Spectral `∂^δφ`.
pub fn spectral_derivative<T: Real>(
    phi: &GridFunction<T>,
    delta: &MultiIndex,
) -> Result<GridFunction<T>> {
    semigroup_derivative(phi, Complex::new(T::zero(), T::zero()), delta)
}
