//! Canonical JSON term lists: `[["coeff", [e1, e2, e3]], ...]`, exponents ascending.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LaurentPolynomial;
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;

/// One `(coefficient, exponent)` entry; coefficients are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term(pub String, pub Vec<i64>);

pub type TermList = Vec<Term>;

impl LaurentPolynomial {
    pub fn to_term_list(&self) -> TermList {
        self.terms()
            .map(|(e, c)| Term(c.to_string(), e.coords().to_vec()))
            .collect()
    }

    /// Parse a term list. Repeated exponents and zero coefficients are rejected.
    pub fn from_term_list(dim: usize, list: &[Term]) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        let mut terms = Vec::with_capacity(list.len());
        for Term(c, e) in list {
            let coeff = BigInt::from_str(c).map_err(|_| Error::Parse {
                offset: 0,
                message: format!("bad coefficient {c:?}"),
            })?;
            if coeff == BigInt::default() {
                return Err(Error::DegenerateInput(format!("zero coefficient at {e:?}")));
            }
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.len(),
                });
            }
            let v = LatticeVector::new(e)?;
            if !seen.insert(v) {
                return Err(Error::DegenerateInput(format!("repeated exponent {e:?}")));
            }
            terms.push((v, coeff));
        }
        Self::from_terms(dim, terms)
    }

    /// Compact canonical JSON of the term list (stable across runs).
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&self.to_term_list()).expect("term list serializes")
    }
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            dim: usize,
            terms: TermList,
        }
        Repr {
            dim: self.dim(),
            terms: self.to_term_list(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            dim: usize,
            terms: TermList,
        }
        let r = Repr::deserialize(d)?;
        LaurentPolynomial::from_term_list(r.dim, &r.terms).map_err(serde::de::Error::custom)
    }
}
