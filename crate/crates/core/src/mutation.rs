//! Mutations `x·g1·g2 + g3 + g4/x  ↦  x·g1 + g3 + g2·g4/x`.
//!
//! The move is the monomial-free substitution `x ↦ x/g2`, so it preserves
//! constant terms of all powers. Non-axis pivots go through a conjugating
//! [`UnimodularMap`] that sends the pivot direction to the chosen axis.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, UnimodularMap};
use crate::laurent::{LaurentPolynomial, TermList};

/// Candidate factors visited before a search gives up.
pub const SEARCH_BUDGET: usize = 200_000;

/// Default bound on the support of searched factors.
pub const DEFAULT_MAX_SUPPORT: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationData {
    pivot: usize,
    g1: LaurentPolynomial,
    g2: LaurentPolynomial,
    g3: LaurentPolynomial,
    g4: LaurentPolynomial,
    conjugation: Option<UnimodularMap>,
}

impl MutationData {
    pub fn new(
        pivot: usize,
        g1: LaurentPolynomial,
        g2: LaurentPolynomial,
        g3: LaurentPolynomial,
        g4: LaurentPolynomial,
    ) -> Result<Self> {
        let dim = g1.dim();
        if pivot >= dim {
            return Err(Error::InvalidMutationData(format!(
                "pivot {pivot} out of range for dimension {dim}"
            )));
        }
        for (name, g) in [("g1", &g1), ("g2", &g2), ("g3", &g3), ("g4", &g4)] {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.dim(),
                });
            }
            if g.terms().any(|(e, _)| e.get(pivot) != 0) {
                return Err(Error::InvalidMutationData(format!(
                    "{name} depends on the pivot variable"
                )));
            }
        }
        if g1.is_zero() || g2.is_zero() {
            return Err(Error::InvalidMutationData(
                "g1 and g2 must be non-zero".into(),
            ));
        }
        Ok(Self {
            pivot,
            g1,
            g2,
            g3,
            g4,
            conjugation: None,
        })
    }

    /// Interpret the factors in coordinates `x^e ↦ x^(U·e)`.
    pub fn with_conjugation(mut self, u: UnimodularMap) -> Result<Self> {
        if !u.is_linear() {
            return Err(Error::InvalidMutationData(
                "conjugation must be linear".into(),
            ));
        }
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        self.conjugation = Some(u);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.g1.dim()
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn g1(&self) -> &LaurentPolynomial {
        &self.g1
    }

    pub fn g2(&self) -> &LaurentPolynomial {
        &self.g2
    }

    pub fn g3(&self) -> &LaurentPolynomial {
        &self.g3
    }

    pub fn g4(&self) -> &LaurentPolynomial {
        &self.g4
    }

    pub fn conjugation(&self) -> Option<&UnimodularMap> {
        self.conjugation.as_ref()
    }

    /// Data for the inverse move: pivot `1/x`, with `g1` and `g4` swapped.
    ///
    /// Applied to `mutate(f, self)` it returns `f`, unless `g4` is zero.
    pub fn reverse(&self) -> Result<Self> {
        let flip = UnimodularMap::reflection(self.dim(), self.pivot);
        let conj = match &self.conjugation {
            Some(u) => flip.compose(u)?,
            None => flip,
        };
        Self::new(
            self.pivot,
            self.g4.clone(),
            self.g2.clone(),
            self.g3.clone(),
            self.g1.clone(),
        )?
        .with_conjugation(conj)
    }

    fn pivot_monomial(&self, power: i64) -> LaurentPolynomial {
        let e = LatticeVector::unit(self.dim(), self.pivot)
            .checked_scale(power)
            .expect("small power");
        LaurentPolynomial::monomial(1, e)
    }

    fn to_local(&self, f: &LaurentPolynomial) -> Result<LaurentPolynomial> {
        match &self.conjugation {
            Some(u) => f.substitute_monomial(u),
            None => Ok(f.clone()),
        }
    }

    fn to_global(&self, f: &LaurentPolynomial) -> Result<LaurentPolynomial> {
        match &self.conjugation {
            Some(u) => f.substitute_monomial(&u.inverse()),
            None => Ok(f.clone()),
        }
    }

    /// `x·g1·g2 + g3 + g4/x` in local coordinates.
    pub fn source_local(&self) -> Result<LaurentPolynomial> {
        let x = self.pivot_monomial(1);
        let xi = self.pivot_monomial(-1);
        x.mul(&self.g1)?
            .mul(&self.g2)?
            .add(&self.g3)?
            .add(&xi.mul(&self.g4)?)
    }

    /// `x·g1 + g3 + g2·g4/x` in local coordinates.
    pub fn target_local(&self) -> Result<LaurentPolynomial> {
        let x = self.pivot_monomial(1);
        let xi = self.pivot_monomial(-1);
        x.mul(&self.g1)?
            .add(&self.g3)?
            .add(&xi.mul(&self.g2)?.mul(&self.g4)?)
    }
}

fn check_pivot_range(f: &LaurentPolynomial, pivot: usize) -> Result<()> {
    match f.terms().map(|(e, _)| e.get(pivot)).find(|k| k.abs() > 1) {
        Some(exponent) => Err(Error::PivotExponentOutOfRange { exponent }),
        None => Ok(()),
    }
}

/// Whether `f = x·g1·g2 + g3 + g4/x` exactly (after conjugation).
pub fn validate_decomposition(f: &LaurentPolynomial, d: &MutationData) -> Result<bool> {
    if f.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            expected: d.dim(),
            found: f.dim(),
        });
    }
    let local = d.to_local(f)?;
    check_pivot_range(&local, d.pivot)?;
    Ok(d.source_local()? == local)
}

pub fn mutate(f: &LaurentPolynomial, d: &MutationData) -> Result<LaurentPolynomial> {
    if !validate_decomposition(f, d)? {
        return Err(Error::InvalidDecomposition);
    }
    d.to_global(&d.target_local()?)
}

/// All decompositions along `pivot` whose factor `g2` has support at most
/// `max_support`, with `g2` normalized (lowest exponent at the origin,
/// positive leading coefficient).
///
/// Candidates for `g2` are the sub-sums of shifts of the level-one part,
/// which is exhaustive whenever `g1` and `g2` have positive coefficients.
/// The walk stops after [`SEARCH_BUDGET`] candidates.
pub fn find_decompositions(
    f: &LaurentPolynomial,
    pivot: usize,
    max_support: usize,
) -> Result<Vec<MutationData>> {
    if pivot >= f.dim() {
        return Err(Error::InvalidMutationData(format!(
            "pivot {pivot} out of range"
        )));
    }
    check_pivot_range(f, pivot)?;
    let upper = f.level(pivot, 1);
    if upper.is_zero() {
        return Ok(Vec::new());
    }
    let middle = f.level(pivot, 0);
    let lower = f.level(pivot, -1);
    let terms: Vec<(LatticeVector, BigInt)> = upper.terms().map(|(e, c)| (*e, c.abs())).collect();
    let signed = upper.terms().any(|(_, c)| c.is_negative());
    let upper_at_one: BigInt = upper.terms().map(|(_, c)| c.clone()).sum();

    let mut found: BTreeMap<String, (LaurentPolynomial, LaurentPolynomial)> = BTreeMap::new();
    let mut chosen: Vec<(LatticeVector, BigInt)> = Vec::new();
    let mut budget = SEARCH_BUDGET;
    let mut failure = None;
    collect_candidates(
        &terms,
        0,
        max_support,
        signed,
        &mut chosen,
        &mut budget,
        &mut |cand| {
            let g = cand.normalize_unit();
            let at_one: BigInt = g.terms().map(|(_, c)| c.clone()).sum();
            if !at_one.is_zero() && !upper_at_one.is_zero() && !(&upper_at_one % &at_one).is_zero()
            {
                return;
            }
            let key = g.canonical_json();
            if found.contains_key(&key) {
                return;
            }
            match upper.exact_div(&g) {
                Ok(Some(g1)) => {
                    found.insert(key, (g1, g));
                }
                Ok(None) => {}
                Err(e) => failure = Some(e),
            }
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }

    let mut out = Vec::new();
    for (g1, g2) in found.into_values() {
        out.push(MutationData::new(
            pivot,
            g1,
            g2,
            middle.clone(),
            lower.clone(),
        )?);
    }
    Ok(out)
}

/// [`find_decompositions`] along a primitive direction `h` of the dual lattice
/// (the grading `e ↦ ⟨h, e⟩` plays the role of the pivot exponent).
pub fn find_decompositions_along(
    f: &LaurentPolynomial,
    h: &LatticeVector,
    max_support: usize,
) -> Result<Vec<MutationData>> {
    let u = UnimodularMap::grading_to_axis(h)?;
    let local = f.substitute_monomial(&u)?;
    find_decompositions(&local, 0, max_support)?
        .into_iter()
        .map(|d| d.with_conjugation(u.clone()))
        .collect()
}

fn collect_candidates(
    terms: &[(LatticeVector, BigInt)],
    start: usize,
    max_support: usize,
    signed: bool,
    chosen: &mut Vec<(LatticeVector, BigInt)>,
    budget: &mut usize,
    emit: &mut dyn FnMut(LaurentPolynomial),
) {
    if *budget == 0 {
        return;
    }
    *budget -= 1;
    if !chosen.is_empty() {
        let dim = chosen[0].0.dim();
        emit(LaurentPolynomial::from_terms(dim, chosen.iter().cloned()).expect("same dimension"));
    }
    if chosen.len() == max_support {
        return;
    }
    for i in start..terms.len() {
        let (e, bound) = &terms[i];
        let mut c = BigInt::one();
        while &c <= bound {
            chosen.push((*e, c.clone()));
            collect_candidates(terms, i + 1, max_support, signed, chosen, budget, emit);
            chosen.pop();
            // The first chosen coefficient fixes the overall sign.
            if signed && !chosen.is_empty() {
                chosen.push((*e, -c.clone()));
                collect_candidates(terms, i + 1, max_support, signed, chosen, budget, emit);
                chosen.pop();
            }
            c += 1;
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MutationRepr {
    pivot: usize,
    g1: TermList,
    g2: TermList,
    g3: TermList,
    g4: TermList,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conjugation: Option<UnimodularMap>,
}

impl Serialize for MutationData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MutationRepr {
            pivot: self.pivot,
            g1: self.g1.to_term_list(),
            g2: self.g2.to_term_list(),
            g3: self.g3.to_term_list(),
            g4: self.g4.to_term_list(),
            conjugation: self.conjugation.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MutationData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = MutationRepr::deserialize(d)?;
        let dim = [&r.g1, &r.g2, &r.g3, &r.g4]
            .iter()
            .find_map(|t| t.first().map(|term| term.1.len()))
            .or(r.conjugation.as_ref().map(UnimodularMap::dim))
            .ok_or_else(|| D::Error::custom("cannot infer dimension: all factors empty"))?;
        let poly =
            |t: &TermList| LaurentPolynomial::from_term_list(dim, t).map_err(D::Error::custom);
        let data = MutationData::new(
            r.pivot,
            poly(&r.g1)?,
            poly(&r.g2)?,
            poly(&r.g3)?,
            poly(&r.g4)?,
        )
        .map_err(D::Error::custom)?;
        match r.conjugation {
            Some(u) => data.with_conjugation(u).map_err(D::Error::custom),
            None => Ok(data),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse;

    fn p(s: &str) -> LaurentPolynomial {
        parse(s, 3).unwrap()
    }

    fn p1_data() -> MutationData {
        MutationData::new(0, p("z + z/y + 1"), p("y + 1/z"), p("0"), p("1")).unwrap()
    }

    #[test]
    fn p1_to_p2() {
        let p1 = p("x*(z + z/y + 1)*(y + 1/z) + 1/x");
        let d = p1_data();
        assert!(validate_decomposition(&p1, &d).unwrap());
        assert_eq!(mutate(&p1, &d).unwrap(), p("x*(z + z/y + 1) + (y + 1/z)/x"));
    }

    #[test]
    fn mismatch_and_range() {
        let f1 = p("x + y + z + 1/(x*y*z)");
        let d = MutationData::new(0, p("1"), p("y + z"), p("0"), p("1/(y*z)")).unwrap();
        assert!(!validate_decomposition(&f1, &d).unwrap());
        assert_eq!(mutate(&f1, &d), Err(Error::InvalidDecomposition));
        let bad = p("x^2 + 1/x");
        assert_eq!(
            validate_decomposition(&bad, &d),
            Err(Error::PivotExponentOutOfRange { exponent: 2 })
        );
    }

    #[test]
    fn rejects_malformed_data() {
        assert!(MutationData::new(0, p("x"), p("1"), p("0"), p("0")).is_err());
        assert!(MutationData::new(0, p("1"), p("0"), p("0"), p("0")).is_err());
        assert!(MutationData::new(3, p("1"), p("1"), p("0"), p("0")).is_err());
    }

    #[test]
    fn trivial_factor_is_identity() {
        let p2 = p("x*(z + z/y + 1) + (y + 1/z)/x");
        let d = MutationData::new(0, p("z + z/y + 1"), p("1"), p("0"), p("y + 1/z")).unwrap();
        assert_eq!(mutate(&p2, &d).unwrap(), p2);
    }

    #[test]
    fn reverse_recovers_source() {
        let p1 = p("x*(z + z/y + 1)*(y + 1/z) + 1/x");
        let d = p1_data();
        let p2 = mutate(&p1, &d).unwrap();
        assert_eq!(mutate(&p2, &d.reverse().unwrap()).unwrap(), p1);
    }

    #[test]
    fn search_finds_known_factor() {
        let p1 = p("x*(z + z/y + 1)*(y + 1/z) + 1/x");
        let found = find_decompositions(&p1, 0, 6).unwrap();
        let target = p("y + 1/z").normalize_unit();
        assert!(found.iter().any(|d| d.g2() == &target));
        for d in &found {
            assert!(validate_decomposition(&p1, d).unwrap());
        }
    }

    #[test]
    fn search_edge_cases() {
        let f = p("x + 1/x");
        let found = find_decompositions(&f, 0, 8).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].g1().equal_up_to_unit(&p("1")));
        assert!(find_decompositions(&p("y + 1/y"), 0, 8).unwrap().is_empty());
    }

    #[test]
    fn negative_coefficients() {
        let f = p("x*(y - 1)*(z + 2) + 3 + 1/x");
        let found = find_decompositions(&f, 0, 4).unwrap();
        assert!(found.iter().any(|d| d.g2().equal_up_to_unit(&p("y - 1"))));
    }

    #[test]
    fn conjugated_pivot() {
        // Pivot along y: swap x and y, mutate, swap back.
        let f = p("y*(x + 1)^2 + z + 1/z + 1/y");
        let found = find_decompositions_along(&f, &LatticeVector::v3(0, 1, 0), 4).unwrap();
        let d = found.iter().find(|d| d.g2().len() == 2).unwrap();
        let g = mutate(&f, d).unwrap();
        assert!(validate_decomposition(&f, d).unwrap());
        assert_eq!(mutate(&g, &d.reverse().unwrap()).unwrap(), f);
    }

    #[test]
    fn json_roundtrip() {
        let d = p1_data()
            .with_conjugation(UnimodularMap::reflection(3, 1))
            .unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert!(text.starts_with(r#"{"pivot":0,"g1":[["#));
        let back: MutationData = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
        let plain = serde_json::to_string(&p1_data()).unwrap();
        assert!(!plain.contains("conjugation"));
    }
}
