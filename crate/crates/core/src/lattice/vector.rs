use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of the integer lattice ℤ² or ℤ³.
///
/// Two-dimensional vectors keep their unused third slot at zero, so the
/// derived ordering is lexicographic on the live coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    coords: [i64; 3],
    dim: u8,
}

impl LatticeVector {
    pub fn new(coords: &[i64]) -> Result<Self> {
        match coords.len() {
            2 => Ok(Self::v2(coords[0], coords[1])),
            3 => Ok(Self::v3(coords[0], coords[1], coords[2])),
            n => Err(Error::UnsupportedDimension(n)),
        }
    }

    pub const fn v2(a: i64, b: i64) -> Self {
        Self {
            coords: [a, b, 0],
            dim: 2,
        }
    }

    pub const fn v3(a: i64, b: i64, c: i64) -> Self {
        Self {
            coords: [a, b, c],
            dim: 3,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            coords: [0; 3],
            dim: dim as u8,
        }
    }

    /// The `i`-th standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[i] = 1;
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.dim as usize]
    }

    #[inline]
    pub fn get(&self, i: usize) -> i64 {
        self.coords[i]
    }

    pub fn with(&self, i: usize, value: i64) -> Self {
        let mut v = *self;
        v.coords[i] = value;
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0; 3]
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> i128 {
        debug_assert_eq!(self.dim, other.dim);
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum()
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = *self;
        for i in 0..3 {
            out.coords[i] = self.coords[i].checked_add(other.coords[i])?;
        }
        Some(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = *self;
        for i in 0..3 {
            out.coords[i] = self.coords[i].checked_sub(other.coords[i])?;
        }
        Some(out)
    }

    pub fn checked_scale(&self, k: i64) -> Option<Self> {
        let mut out = *self;
        for c in out.coords.iter_mut() {
            *c = c.checked_mul(k)?;
        }
        Some(out)
    }

    /// Gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> i64 {
        self.coords.iter().fold(0i64, |g, &c| g.gcd(&c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Cross product of two 3-vectors, computed without overflow.
    pub fn cross_wide(&self, other: &Self) -> [i128; 3] {
        let a = self.coords.map(|c| c as i128);
        let b = other.coords.map(|c| c as i128);
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    /// 2×2 determinant of the first two coordinates.
    pub fn det2(&self, other: &Self) -> i128 {
        self.coords[0] as i128 * other.coords[1] as i128
            - self.coords[1] as i128 * other.coords[0] as i128
    }
}

impl std::ops::Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("lattice coordinate overflow")
    }
}

impl std::ops::Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("lattice coordinate overflow")
    }
}

impl std::ops::Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> Self {
        self.checked_scale(-1).expect("lattice coordinate overflow")
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        LatticeVector::new(&v).map_err(serde::de::Error::custom)
    }
}

/// Narrow an `i128` to an `i64`, reporting overflow.
pub(crate) fn narrow(v: i128, what: &'static str) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow(what))
}

pub(crate) fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Divide a wide vector by the gcd of its entries.
pub(crate) fn primitive_wide(v: [i128; 3], dim: usize) -> Result<LatticeVector> {
    let g = v.iter().fold(0i128, |g, &c| gcd_i128(g, c));
    debug_assert!(g != 0);
    let mut out = LatticeVector::zero(dim);
    for (slot, &c) in out.coords[..dim].iter_mut().zip(&v) {
        *slot = narrow(c / g, "facet normal")?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_lexicographic() {
        let mut v = vec![
            LatticeVector::v3(0, 1, 0),
            LatticeVector::v3(-1, 5, 5),
            LatticeVector::v3(0, 0, 9),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                LatticeVector::v3(-1, 5, 5),
                LatticeVector::v3(0, 0, 9),
                LatticeVector::v3(0, 1, 0)
            ]
        );
    }

    #[test]
    fn content_and_primitivity() {
        assert_eq!(LatticeVector::v3(2, 4, -6).content(), 2);
        assert!(LatticeVector::v2(3, -2).is_primitive());
        assert!(!LatticeVector::zero(3).is_primitive());
    }

    #[test]
    fn rejects_bad_dimension() {
        assert_eq!(
            LatticeVector::new(&[1, 2, 3, 4]),
            Err(Error::UnsupportedDimension(4))
        );
    }

    #[test]
    fn json_roundtrip() {
        let v = LatticeVector::v3(-1, 0, 7);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[-1,0,7]");
        assert_eq!(serde_json::from_str::<LatticeVector>(&s).unwrap(), v);
    }
}
