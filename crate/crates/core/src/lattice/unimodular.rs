use rand::Rng;
use serde::{Deserialize, Serialize};

use super::hnf::{hermite_with_transform, IntMatrix};
use super::vector::{narrow, LatticeVector};
use crate::error::{Error, Result};

/// An element of GL(n, ℤ), optionally followed by a lattice translation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "UnimodularRepr", into = "UnimodularRepr")]
pub struct UnimodularMap {
    matrix: Vec<Vec<i64>>,
    translation: Option<LatticeVector>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum UnimodularRepr {
    Bare(Vec<Vec<i64>>),
    Affine {
        matrix: Vec<Vec<i64>>,
        translation: Option<LatticeVector>,
    },
}

impl TryFrom<UnimodularRepr> for UnimodularMap {
    type Error = Error;
    fn try_from(r: UnimodularRepr) -> Result<Self> {
        match r {
            UnimodularRepr::Bare(m) => UnimodularMap::new(m),
            UnimodularRepr::Affine {
                matrix,
                translation,
            } => {
                let u = UnimodularMap::new(matrix)?;
                match translation {
                    Some(t) => u.with_translation(t),
                    None => Ok(u),
                }
            }
        }
    }
}

impl From<UnimodularMap> for UnimodularRepr {
    fn from(u: UnimodularMap) -> Self {
        match u.translation {
            None => UnimodularRepr::Bare(u.matrix),
            Some(t) => UnimodularRepr::Affine {
                matrix: u.matrix,
                translation: Some(t),
            },
        }
    }
}

impl UnimodularMap {
    /// Build from a square matrix (rows), checking `|det| = 1`.
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = matrix.len();
        if !(2..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        if let Some(bad) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let det = to_int(&matrix).det();
        if det.abs() != 1 {
            return Err(Error::NotUnimodular { det });
        }
        Ok(Self {
            matrix,
            translation: None,
        })
    }

    pub fn identity(dim: usize) -> Self {
        let matrix = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        Self {
            matrix,
            translation: None,
        }
    }

    /// Diagonal sign flip of one coordinate.
    pub fn reflection(dim: usize, axis: usize) -> Self {
        let mut u = Self::identity(dim);
        u.matrix[axis][axis] = -1;
        u
    }

    pub fn with_translation(mut self, t: LatticeVector) -> Result<Self> {
        if t.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: t.dim(),
            });
        }
        self.translation = if t.is_zero() { None } else { Some(t) };
        Ok(self)
    }

    /// A map whose first output coordinate is the linear functional `grading`.
    ///
    /// Used to bring an arbitrary primitive grading onto a coordinate axis.
    pub fn grading_to_axis(grading: &LatticeVector) -> Result<Self> {
        if !grading.is_primitive() {
            return Err(Error::DegenerateInput(format!(
                "grading {grading} is not primitive"
            )));
        }
        let col = IntMatrix::from_rows(grading.coords().iter().map(|&c| vec![c as i128]).collect());
        let (_, w, _) = hermite_with_transform(&col);
        // w·g = e1, so the first row of (w⁻¹)ᵀ is g.
        let winv = if w.det() == 1 {
            w.adjugate()
        } else {
            let adj = w.adjugate();
            IntMatrix::from_rows(
                adj.rows
                    .iter()
                    .map(|r| r.iter().map(|v| -v).collect())
                    .collect(),
            )
        };
        let m = winv.transpose();
        let matrix = m
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| narrow(v, "unimodular completion"))
                    .collect()
            })
            .collect::<Result<Vec<Vec<i64>>>>()?;
        debug_assert_eq!(matrix[0], grading.coords());
        Self::new(matrix)
    }

    /// Rejection-sample a matrix with entries in `[-bound, bound]` and `|det| = 1`.
    pub fn random<R: Rng + ?Sized>(dim: usize, bound: i64, rng: &mut R) -> Self {
        loop {
            let matrix: Vec<Vec<i64>> = (0..dim)
                .map(|_| (0..dim).map(|_| rng.random_range(-bound..=bound)).collect())
                .collect();
            if to_int(&matrix).det().abs() == 1 {
                return Self {
                    matrix,
                    translation: None,
                };
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn translation(&self) -> Option<&LatticeVector> {
        self.translation.as_ref()
    }

    pub fn is_linear(&self) -> bool {
        self.translation.is_none()
    }

    pub fn det(&self) -> i64 {
        to_int(&self.matrix).det() as i64
    }

    /// `M·v + t`.
    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        let mut out = LatticeVector::zero(self.dim());
        for (i, row) in self.matrix.iter().enumerate() {
            let mut acc: i128 = row
                .iter()
                .zip(v.coords())
                .map(|(&a, &b)| a as i128 * b as i128)
                .sum();
            if let Some(t) = &self.translation {
                acc += t.get(i) as i128;
            }
            out = out.with(i, narrow(acc, "unimodular image")?);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Self {
        let m = to_int(&self.matrix);
        let adj = m.adjugate();
        let det = m.det();
        let matrix: Vec<Vec<i64>> = adj
            .rows
            .iter()
            .map(|r| r.iter().map(|&v| (v * det) as i64).collect())
            .collect();
        let mut inv = Self {
            matrix,
            translation: None,
        };
        if let Some(t) = &self.translation {
            let back = inv.apply(t).expect("dimension checked at construction");
            inv.translation = Some(-back);
        }
        inv
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let prod = to_int(&self.matrix).mul(&to_int(&other.matrix));
        let matrix = prod
            .rows
            .iter()
            .map(|r| r.iter().map(|&v| narrow(v, "matrix product")).collect())
            .collect::<Result<Vec<Vec<i64>>>>()?;
        let mut out = Self {
            matrix,
            translation: None,
        };
        let t = match &other.translation {
            Some(t) => self.apply(t)?,
            None => self.translation.unwrap_or(LatticeVector::zero(self.dim())),
        };
        if !t.is_zero() {
            out.translation = Some(t);
        }
        Ok(out)
    }
}

pub(crate) fn to_int(m: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(
        m.iter()
            .map(|r| r.iter().map(|&v| v as i128).collect())
            .collect(),
    )
}
