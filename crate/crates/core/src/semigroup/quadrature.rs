//! Trapezoid-rule convolution with exact (non-periodized) kernels.
//!
//! Every kernel used here factors over the axes, so the n-dimensional sum
//! `Σ_y K(x−y)φ(y)h^n` is computed as n successive 1-d convolutions.

use num_complex::Complex;

use super::grid::{process_lines, GridFunction, GridShape};
use super::{ComplexParam, kernel_axis_factor};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::scalar::Real;

/// Offset table `t[d + N − 1] = h·k(d·h)` for `d ∈ [−(N−1), N−1]`.
fn offset_table<T: Real, K>(shape: &GridShape<T>, k: K) -> Vec<Complex<T>>
where
    K: Fn(T) -> Complex<T>,
{
    let n = shape.points() as i64;
    let h = shape.spacing();
    (-(n - 1)..n)
        .map(|d| k(T::lit(d as f64) * h) * h)
        .collect()
}

/// Convolves along every axis with the matching offset table.
pub(crate) fn convolve_separable<T: Real>(
    phi: &GridFunction<T>,
    tables: &[Vec<Complex<T>>],
) -> GridFunction<T> {
    let shape = *phi.shape();
    let n = shape.points();
    let mut data = phi.samples().to_vec();
    for (axis, table) in tables.iter().enumerate() {
        process_lines(&shape, &mut data, axis, |line| {
            let input = line.to_vec();
            for (i, out) in line.iter_mut().enumerate() {
                let row = &table[i..i + n];
                // row[n − 1 − j] pairs with input[j]
                let mut acc = Complex::new(T::zero(), T::zero());
                for (j, &v) in input.iter().enumerate() {
                    acc += row[n - 1 - j] * v;
                }
                *out = acc;
            }
        });
    }
    GridFunction::from_parts(shape, data)
}

/// `(x^β G_ω) ∗ φ` by direct quadrature, `re ω > 0`.
pub fn weighted_kernel_convolution<T: Real>(
    phi: &GridFunction<T>,
    omega: &ComplexParam<T>,
    beta: &MultiIndex,
) -> Result<GridFunction<T>> {
    if beta.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            found: beta.dim(),
        });
    }
    let w = omega.value();
    let tables: Vec<_> = beta
        .components()
        .iter()
        .map(|&b| offset_table(phi.shape(), |s| kernel_axis_factor(w, s) * s.powi(b as i32)))
        .collect();
    Ok(convolve_separable(phi, &tables))
}

/// `G_ω ∗ φ` by direct quadrature; the slow oracle for [`super::apply_fourier`].
pub fn apply_direct<T: Real>(
    phi: &GridFunction<T>,
    omega: &ComplexParam<T>,
) -> Result<GridFunction<T>> {
    weighted_kernel_convolution(phi, omega, &MultiIndex::zero(phi.dim()))
}
