//! Commutators of monomial weights with the complex Gauss-Weierstrass semigroup.
//!
//! The crate pairs exact symbolic algebra (multi-indices, Hermite polynomials
//! with a complex parameter, Laurent coefficients over big integers) with grid
//! evaluators of `e^{ωΔ}` and of the commutator `[x^α, e^{ωΔ}]`. Numerical code
//! is generic over [`Real`]; the aliases at the crate root fix `f64`.

pub mod catalog;
pub mod cgl;
pub mod cli;
pub mod commutator;
pub mod error;
pub mod estimates;
pub mod harness;
pub mod hermite;
pub mod multiindex;
pub mod scalar;
pub mod semigroup;

pub use error::{Error, Result};
pub use multiindex::MultiIndex;
pub use scalar::{Exponent, Real};

pub type Grid = semigroup::GridFunction<f64>;
pub type Shape = semigroup::GridShape<f64>;
pub type Omega = semigroup::ComplexParam<f64>;
pub type Complex64 = num_complex::Complex<f64>;
