//! Exact Laurent polynomials `Σ c_k ω^k` with big-integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Polynomial in `ω` and `ω⁻¹`. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    /// `c·ω^k`.
    pub fn monomial(c: impl Into<BigInt>, k: i32) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i32) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    fn accumulate(&mut self, k: i32, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Multiplies by `ω^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, c * s)).collect(),
        }
    }

    /// Exact division by an integer; `None` when some coefficient is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (&e, c) in &self.terms {
            if !(c % d).is_zero() {
                return None;
            }
            terms.insert(e, c / d);
        }
        Some(Self { terms })
    }

    /// Substitutes `ω ↦ 1/ω`.
    pub fn invert_variable(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Value at `ω = 1`.
    pub fn at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn eval<T: Real>(&self, omega: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (&k, c) in &self.terms {
            let c = T::lit(c.to_f64().unwrap_or(f64::NAN));
            acc = acc + omega.powi(k) * c;
        }
        acc
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.accumulate(k, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                out.accumulate(a + b, &(ca * cb));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for LaurentPoly {
    /// `c*w^k` terms in increasing exponent order, joined by their signs,
    /// e.g. `1*w^-2-2*w^-1`. The zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if c.is_negative() {
                write!(f, "-{}*w^{k}", c.abs())?;
            } else if i == 0 {
                write!(f, "{c}*w^{k}")?;
            } else {
                write!(f, "+{c}*w^{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let bad = || Error::Parse(format!("bad Laurent polynomial '{s}'"));
        // Split before every sign that starts a term (a sign right after '^'
        // belongs to the exponent).
        let bytes = s.as_bytes();
        let mut starts = vec![0];
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                starts.push(i);
            }
        }
        starts.push(bytes.len());
        let mut out = Self::zero();
        for w in starts.windows(2) {
            let term = &s[w[0]..w[1]];
            let term = term.strip_prefix('+').unwrap_or(term);
            let (c, k) = term.split_once("*w^").ok_or_else(bad)?;
            let c: BigInt = c.parse().map_err(|_| bad())?;
            let k: i32 = k.parse().map_err(|_| bad())?;
            out.accumulate(k, &c);
        }
        Ok(out)
    }
}
