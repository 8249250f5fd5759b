//! Multi-indices `α ∈ Z_{≥0}^n` and the enumerations built on them.
//!
//! The dimension is a runtime value. Ordering is graded lexicographic: lower
//! total degree first, and within one degree `(2,0) < (1,1) < (0,2)`, so an
//! ascending sort reproduces the canonical listing used in every report.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    components: Vec<u32>,
}

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter(
                "multi-index dimension must be at least 1".into(),
            ));
        }
        Ok(Self { components })
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "multi-index dimension must be at least 1");
        Self {
            components: vec![0; dim],
        }
    }

    /// The unit index `e_j` (0-based axis).
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut e = Self::zero(dim);
        e.components[axis] = 1;
        e
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.components
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.components[axis]
    }

    /// Total degree `|α|`.
    pub fn order(&self) -> u32 {
        self.components.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|&a| a == 0)
    }

    /// `α! = ∏ α_j!`, exact.
    pub fn factorial(&self) -> BigUint {
        self.components
            .iter()
            .fold(BigUint::one(), |acc, &a| acc * factorial(a))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .all(|(a, b)| a <= b))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `α − β` when `β ≤ α`, `None` otherwise. Mismatched dimensions are an error.
    pub fn sub_checked(&self, other: &Self) -> Result<Option<Self>> {
        self.check_dim(other)?;
        let mut components = Vec::with_capacity(self.dim());
        for (&a, &b) in self.components.iter().zip(&other.components) {
            match a.checked_sub(b) {
                Some(d) => components.push(d),
                None => return Ok(None),
            }
        }
        Ok(Some(Self { components }))
    }

    /// `λα`.
    pub fn scale(&self, lambda: u32) -> Self {
        Self {
            components: self.components.iter().map(|a| a * lambda).collect(),
        }
    }

    pub fn with_axis_added(&self, axis: usize, delta: i64) -> Option<Self> {
        let mut c = self.components.clone();
        let v = c[axis] as i64 + delta;
        if v < 0 {
            return None;
        }
        c[axis] = v as u32;
        Some(Self { components: c })
    }

    /// `x^α` at a point.
    pub fn monomial<T: num_traits::Float>(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.dim());
        self.components
            .iter()
            .zip(x)
            .fold(T::one(), |acc, (&a, &xi)| acc * xi.powi(a as i32))
    }

    /// Every `β ≤ α`, in canonical order.
    pub fn dominated(&self) -> Vec<MultiIndex> {
        let bounds: Vec<u32> = self.components.clone();
        let mut out = box_product(&bounds);
        out.sort();
        out
    }

    /// Every split `α = β + γ`, as `(β, γ)` pairs ordered by `β`.
    pub fn splits(&self) -> Vec<(MultiIndex, MultiIndex)> {
        self.dominated()
            .into_iter()
            .map(|beta| {
                let gamma = self
                    .sub_checked(&beta)
                    .expect("same dimension")
                    .expect("beta dominated by alpha");
                (beta, gamma)
            })
            .collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.order().cmp(&other.order()))
            .then_with(|| other.components.cmp(&self.components))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, a) in self.components.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_string().replace('.', ","))
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    /// Parses the dot-separated form `"a1.a2.….an"`.
    fn from_str(s: &str) -> Result<Self> {
        let components = s
            .trim()
            .split('.')
            .map(|p| {
                p.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad multi-index '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        MultiIndex::new(components)
    }
}

pub fn factorial(k: u32) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, j| acc * j)
}

/// Binomial coefficient `C(n, k)` as an exact integer.
pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Number of multi-indices of dimension `n` and degree `m`: `(n+m−1)!/((n−1)! m!)`.
pub fn level_count(n: usize, m: u32) -> BigUint {
    binomial(n as u32 + m - 1, m)
}

fn box_product(bounds: &[u32]) -> Vec<MultiIndex> {
    let mut out = vec![Vec::with_capacity(bounds.len())];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                (0..=b).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|components| MultiIndex { components })
        .collect()
}

/// All `α` of dimension `n` with `|α| = m`, in graded lexicographic order.
pub fn enumerate_level(n: usize, m: u32) -> Vec<MultiIndex> {
    assert!(n >= 1, "dimension must be at least 1");
    fn rec(remaining: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(MultiIndex {
                components: prefix.clone(),
            });
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first);
            rec(remaining - first, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All `β` with `2β ≤ α`, in canonical order.
pub fn enumerate_half_dominated(alpha: &MultiIndex) -> Vec<MultiIndex> {
    let bounds: Vec<u32> = alpha.components.iter().map(|a| a / 2).collect();
    let mut out = box_product(&bounds);
    out.sort();
    out
}

/// All `α` of dimension `n` with `1 ≤ |α| ≤ max_order`.
pub fn enumerate_up_to(n: usize, max_order: u32) -> Vec<MultiIndex> {
    (1..=max_order).flat_map(|m| enumerate_level(n, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn mi(c: &[u32]) -> MultiIndex {
        MultiIndex::new(c.to_vec()).unwrap()
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(mi(&[0, 0, 0]).factorial(), BigUint::from(1u32));
        assert_eq!(mi(&[3, 1]).factorial(), BigUint::from(6u32));
        assert_eq!(mi(&[4, 2, 3]).factorial(), BigUint::from(288u32));
    }

    #[test]
    fn sub_checked_examples() {
        assert_eq!(mi(&[2, 1]).sub_checked(&mi(&[1, 0])).unwrap(), Some(mi(&[1, 1])));
        assert_eq!(mi(&[2, 1]).sub_checked(&mi(&[0, 2])).unwrap(), None);
        assert_eq!(mi(&[3, 3]).sub_checked(&mi(&[3, 3])).unwrap(), Some(mi(&[0, 0])));
        assert!(matches!(
            mi(&[1, 1]).sub_checked(&mi(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn level_examples() {
        assert_eq!(
            enumerate_level(2, 2),
            vec![mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]
        );
        assert_eq!(enumerate_level(1, 5), vec![mi(&[5])]);
        assert_eq!(enumerate_level(3, 2).len(), 6);
    }

    #[test]
    fn half_dominated_examples() {
        assert_eq!(enumerate_half_dominated(&mi(&[2])), vec![mi(&[0]), mi(&[1])]);
        assert_eq!(
            enumerate_half_dominated(&mi(&[3, 1])),
            vec![mi(&[0, 0]), mi(&[1, 0])]
        );
        assert_eq!(enumerate_half_dominated(&mi(&[0, 0])), vec![mi(&[0, 0])]);
    }

    #[test]
    fn level_enumeration_exhaustive() {
        for n in 1..=4 {
            for m in 0..=8 {
                let level = enumerate_level(n, m);
                assert_eq!(BigUint::from(level.len()), level_count(n, m));
                let set: HashSet<_> = level.iter().cloned().collect();
                assert_eq!(set.len(), level.len(), "duplicates at n={n}, m={m}");
                assert!(level.iter().all(|a| a.order() == m && a.dim() == n));
                let mut sorted = level.clone();
                sorted.sort();
                assert_eq!(sorted, level, "not in canonical order at n={n}, m={m}");
            }
        }
    }

    #[test]
    fn half_dominated_count() {
        let a = mi(&[5, 2, 3]);
        let hd = enumerate_half_dominated(&a);
        assert_eq!(hd.len(), 3 * 2 * 2);
        assert!(hd.iter().all(|b| b.scale(2).le(&a).unwrap()));
    }

    #[test]
    fn display_round_trip() {
        let a = mi(&[3, 0, 12]);
        assert_eq!(a.to_string(), "3.0.12");
        assert_eq!("3.0.12".parse::<MultiIndex>().unwrap(), a);
        assert!("3,1".parse::<MultiIndex>().is_err());
        assert!("".parse::<MultiIndex>().is_err());
    }

    #[test]
    fn splits_cover_every_pair() {
        let a = mi(&[2, 1]);
        let s = a.splits();
        assert_eq!(s.len(), 6);
        for (b, g) in &s {
            assert_eq!(b.checked_add(g).unwrap(), a);
        }
    }
}
