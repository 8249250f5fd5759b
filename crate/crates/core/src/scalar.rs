//! Scalar abstraction shared by every numerical module.
//!
//! Grid functions, kernels, norms and the time stepper are written once over
//! [`Real`]; `f64` is the working precision of the verification harnesses and
//! `f32` is supported for quick low-precision experiments. Exact quantities
//! (factorials, Hermite coefficients) never go through this trait, they use
//! big integers.

use std::fmt::{self, Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

use crate::error::{Error, Result};

/// Floating point type usable by the grid and spectral machinery.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + rustfft::FftNum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal; every `Real` can represent (a rounding of) any f64.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(k: usize) -> Self {
        Self::from_usize(k).expect("count representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over a [`Real`].
pub type C<T> = Complex<T>;

/// Sums complex values pairwise; the error grows like `log n` instead of `n`.
pub fn pairwise_sum<T: Real>(values: &[Complex<T>]) -> Complex<T> {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, v| acc + v);
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Lebesgue exponent in `[1, ∞]`.
///
/// All arithmetic goes through the reciprocal, with `1/∞ = 0`, so the
/// infinite exponent never appears as a floating point infinity.
#[derive(Clone, Copy, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinity,
}

impl<T: Real> Exponent<T> {
    pub fn finite(p: T) -> Result<Self> {
        if !(p >= T::one()) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Lebesgue exponent must lie in [1, inf], got {p}"
            )));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn one() -> Self {
        Exponent::Finite(T::one())
    }

    pub fn two() -> Self {
        Exponent::Finite(T::lit(2.0))
    }

    pub fn reciprocal(&self) -> T {
        match *self {
            Exponent::Finite(p) => T::one() / p,
            Exponent::Infinity => T::zero(),
        }
    }

    /// Builds the exponent whose reciprocal is `s`, for `s ∈ [0, 1]`.
    pub fn from_reciprocal(s: T) -> Result<Self> {
        let tol = T::lit(64.0) * T::epsilon();
        if s < -tol || s > T::one() + tol {
            return Err(Error::InvalidParameter(format!(
                "reciprocal exponent {s} outside [0, 1]"
            )));
        }
        if s <= tol {
            Ok(Exponent::Infinity)
        } else if s >= T::one() {
            Ok(Exponent::Finite(T::one()))
        } else {
            Ok(Exponent::Finite(T::one() / s))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            Exponent::Finite(p) => p.to_f64_lossy(),
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl<T: Real> Debug for Exponent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl<T: Real> Display for Exponent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl<T: Real> FromStr for Exponent<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent '{s}'")))?;
                if p.is_infinite() {
                    return Ok(Exponent::Infinity);
                }
                Exponent::finite(T::lit(p))
            }
        }
    }
}

/// Parses `"re,im"` (or a bare real) into a complex number.
pub fn parse_complex<T: Real>(s: &str) -> Result<Complex<T>> {
    let mut parts = s.split(',').map(str::trim);
    let re = parts
        .next()
        .filter(|p| !p.is_empty())
        .ok_or_else(|| Error::Parse(format!("bad complex value '{s}'")))?;
    let im = parts.next().unwrap_or("0");
    if parts.next().is_some() {
        return Err(Error::Parse(format!("bad complex value '{s}'")));
    }
    let re: f64 = re
        .parse()
        .map_err(|_| Error::Parse(format!("bad real part in '{s}'")))?;
    let im: f64 = im
        .parse()
        .map_err(|_| Error::Parse(format!("bad imaginary part in '{s}'")))?;
    Ok(Complex::new(T::lit(re), T::lit(im)))
}
