use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform grid on `[−L, L)^n` with `N` points per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridShape<T> {
    dim: usize,
    points: usize,
    half_width: T,
}

impl<T: Real> GridShape<T> {
    pub fn new(dim: usize, points: usize, half_width: T) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGrid("dimension must be at least 1".into()));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two ≥ 8, got {points}"
            )));
        }
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "box half-width must be positive, got {half_width}"
            )));
        }
        points
            .checked_pow(dim as u32)
            .filter(|&len| len <= 1 << 28)
            .ok_or_else(|| Error::InvalidGrid(format!("{points}^{dim} samples is too many")))?;
        Ok(Self {
            dim,
            points,
            half_width,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    /// Total number of samples `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing `h = 2L/N`.
    pub fn spacing(&self) -> T {
        T::lit(2.0) * self.half_width / T::from_count(self.points)
    }

    /// Quadrature weight `h^n`.
    pub fn cell_volume(&self) -> T {
        self.spacing().powi(self.dim as i32)
    }

    /// Coordinate `−L + i·h` of grid line `i`.
    pub fn coordinate(&self, i: usize) -> T {
        -self.half_width + T::from_count(i) * self.spacing()
    }

    pub fn coordinates(&self) -> Vec<T> {
        (0..self.points).map(|i| self.coordinate(i)).collect()
    }

    /// Writes the point of flat (row-major, axis 0 slowest) index `flat` into `x`.
    pub fn point_into(&self, flat: usize, x: &mut [T]) {
        let mut rest = flat;
        for a in (0..self.dim).rev() {
            x[a] = self.coordinate(rest % self.points);
            rest /= self.points;
        }
    }

    pub fn point(&self, flat: usize) -> Vec<T> {
        let mut x = vec![T::zero(); self.dim];
        self.point_into(flat, &mut x);
        x
    }

    /// Flat index of the grid point nearest the origin.
    pub fn origin_index(&self) -> usize {
        let mid = self.points / 2;
        (0..self.dim).fold(0, |acc, _| acc * self.points + mid)
    }
}

/// Complex samples of a function on a [`GridShape`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    shape: GridShape<T>,
    samples: Vec<Complex<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(shape: GridShape<T>, samples: Vec<Complex<T>>) -> Result<Self> {
        if samples.len() != shape.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                shape.len(),
                samples.len()
            )));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidGrid("samples must be finite".into()));
        }
        Ok(Self { shape, samples })
    }

    /// Builds a grid function without the finiteness scan; callers guarantee it.
    pub(crate) fn from_parts(shape: GridShape<T>, samples: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(samples.len(), shape.len());
        Self { shape, samples }
    }

    pub fn zeros(shape: GridShape<T>) -> Self {
        Self {
            shape,
            samples: vec![Complex::new(T::zero(), T::zero()); shape.len()],
        }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn<F>(shape: GridShape<T>, f: F) -> Self
    where
        F: Fn(&[T]) -> Complex<T> + Sync,
    {
        let samples = (0..shape.len())
            .into_par_iter()
            .map_init(
                || vec![T::zero(); shape.dim()],
                |x, flat| {
                    shape.point_into(flat, x);
                    f(x)
                },
            )
            .collect();
        Self { shape, samples }
    }

    pub fn shape(&self) -> &GridShape<T> {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex<T>> {
        self.samples
    }

    pub fn conformable(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::NotConformable);
        }
        Ok(())
    }

    /// Pointwise `f(x, φ(x))`.
    pub fn map_with_point<F>(&self, f: F) -> Self
    where
        F: Fn(&[T], Complex<T>) -> Complex<T> + Sync,
    {
        let shape = self.shape;
        let samples = self
            .samples
            .par_iter()
            .enumerate()
            .map_init(
                || vec![T::zero(); shape.dim()],
                |x, (flat, &v)| {
                    shape.point_into(flat, x);
                    f(x, v)
                },
            )
            .collect();
        Self { shape, samples }
    }

    pub fn map<F>(&self, f: F) -> Self
    where
        F: Fn(Complex<T>) -> Complex<T> + Sync,
    {
        Self {
            shape: self.shape,
            samples: self.samples.par_iter().map(|&v| f(v)).collect(),
        }
    }

    fn zip_with<F>(&self, other: &Self, f: F) -> Result<Self>
    where
        F: Fn(Complex<T>, Complex<T>) -> Complex<T> + Sync,
    {
        self.conformable(other)?;
        Ok(Self {
            shape: self.shape,
            samples: self
                .samples
                .par_iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map(|v| v * c)
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: Complex<T>, other: &Self, b: Complex<T>) -> Result<Self> {
        self.zip_with(other, |u, v| u * a + v * b)
    }

    /// Adds `other` in place.
    pub fn accumulate(&mut self, other: &Self) -> Result<()> {
        self.conformable(other)?;
        self.samples
            .par_iter_mut()
            .zip(&other.samples)
            .for_each(|(a, &b)| *a = *a + b);
        Ok(())
    }

    /// Sample at the grid point nearest the origin.
    pub fn at_origin(&self) -> Complex<T> {
        self.samples[self.shape.origin_index()]
    }

    pub fn max_abs(&self) -> T {
        self.samples
            .iter()
            .fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Fraction of the L¹ mass lying within distance `L/2` of the box boundary.
    pub fn boundary_mass_fraction(&self) -> T {
        let half = self.shape.half_width() / T::lit(2.0);
        let mut total = T::zero();
        let mut outer = T::zero();
        let mut x = vec![T::zero(); self.dim()];
        for (flat, z) in self.samples.iter().enumerate() {
            self.shape.point_into(flat, &mut x);
            let a = z.norm();
            total += a;
            if x.iter().any(|&xi| xi.abs() > half) {
                outer += a;
            }
        }
        if total > T::zero() {
            outer / total
        } else {
            T::zero()
        }
    }
}

/// Runs `f` on every 1-d line of `data` parallel to `axis`, in place.
pub(crate) fn process_lines<T, F>(shape: &GridShape<T>, data: &mut [Complex<T>], axis: usize, f: F)
where
    T: Real,
    F: Fn(&mut [Complex<T>]) + Sync + Send,
{
    let n = shape.points();
    let stride = n.pow((shape.dim() - 1 - axis) as u32);
    if stride == 1 {
        data.par_chunks_mut(n).for_each(f);
        return;
    }
    let block = n * stride;
    let mut buf = vec![Complex::new(T::zero(), T::zero()); data.len()];
    // Line l = (b, o) with b the outer block and o the inner offset.
    let line_start = |l: usize| (l / stride) * block + l % stride;
    let src: &[Complex<T>] = data;
    buf.par_chunks_mut(n).enumerate().for_each(|(l, line)| {
        let start = line_start(l);
        for (k, v) in line.iter_mut().enumerate() {
            *v = src[start + k * stride];
        }
        f(line);
    });
    for (l, line) in buf.chunks(n).enumerate() {
        let start = line_start(l);
        for (k, v) in line.iter().enumerate() {
            data[start + k * stride] = *v;
        }
    }
}

/// `‖a − b‖₂ / max(‖b‖₂, 1e−30)`; `b` is the reference.
pub fn relative_l2_error<T: Real>(a: &GridFunction<T>, b: &GridFunction<T>) -> Result<T> {
    a.conformable(b)?;
    let diff: T = a
        .samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    let reference: T = b.samples.iter().map(|y| y.norm_sqr()).sum();
    let floor = T::lit(1e-30);
    Ok(diff.sqrt() / reference.sqrt().max(floor))
}
