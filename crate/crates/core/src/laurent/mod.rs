//! Sparse Laurent polynomials with arbitrary-precision integer coefficients.

mod parse;
mod termlist;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LatticePolytope, LatticeVector, UnimodularMap};

pub use parse::parse;
pub use termlist::{Term, TermList};

/// Variable names used for parsing and display.
pub const VARIABLES: [char; 3] = ['x', 'y', 'z'];

/// `Σ c_e · x^e` over a finite set of exponents, with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    dim: usize,
    terms: BTreeMap<LatticeVector, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(BigInt::one(), LatticeVector::zero(dim))
    }

    pub fn monomial(coeff: impl Into<BigInt>, exponent: LatticeVector) -> Self {
        let mut p = Self::zero(exponent.dim());
        p.add_term(exponent, coeff.into());
        p
    }

    /// The variable `x_i` (0-based).
    pub fn variable(dim: usize, i: usize) -> Self {
        Self::monomial(1, LatticeVector::unit(dim, i))
    }

    /// Build from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I, C>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticeVector, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            p.add_term(e, c.into());
        }
        Ok(p)
    }

    fn add_term(&mut self, e: LatticeVector, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same as [`is_zero`](Self::is_zero).
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&LatticeVector, &BigInt)> + '_ {
        self.terms.iter()
    }

    pub fn exponents(&self) -> Vec<LatticeVector> {
        self.terms.keys().copied().collect()
    }

    pub fn coeff(&self, e: &LatticeVector) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&LatticeVector::zero(self.dim))
    }

    /// Coefficients in exponent order (a multiset invariant of monomial maps).
    pub fn coefficients(&self) -> Vec<BigInt> {
        self.terms.values().cloned().collect()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scalar_mul(&BigInt::from(-1))
    }

    pub fn scalar_mul(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Product by sorted merge of all pairwise term products.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut products: Vec<(LatticeVector, BigInt)> =
            Vec::with_capacity(self.len() * other.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.checked_add(eb).ok_or(Error::Overflow("exponent sum"))?;
                products.push((e, ca * cb));
            }
        }
        products.sort_by_key(|a| a.0);
        let mut terms = BTreeMap::new();
        let mut iter = products.into_iter().peekable();
        while let Some((e, mut c)) = iter.next() {
            while let Some((_, more)) = iter.next_if(|(e2, _)| *e2 == e) {
                c += more;
            }
            if !c.is_zero() {
                terms.insert(e, c);
            }
        }
        Ok(Self {
            dim: self.dim,
            terms,
        })
    }

    pub fn pow(&self, i: u32) -> Self {
        self.pow_bounded(i, |_, _| true)
    }

    /// `self^i` with pruning: after `k` factors, terms whose exponent fails
    /// `keep(k, e)` are dropped.
    ///
    /// Equals `self^i` restricted to kept exponents whenever the predicate is
    /// closed under the pruning rule (a dropped term never feeds a kept one).
    pub fn pow_bounded(&self, i: u32, keep: impl Fn(u32, &LatticeVector) -> bool) -> Self {
        let mut acc: HashMap<LatticeVector, BigInt> = HashMap::new();
        acc.insert(LatticeVector::zero(self.dim), BigInt::one());
        let factors: Vec<(LatticeVector, BigInt)> =
            self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        for k in 1..=i {
            let mut next: HashMap<LatticeVector, BigInt> = HashMap::with_capacity(acc.len() * 2);
            for (ea, ca) in &acc {
                for (eb, cb) in &factors {
                    let e = ea.checked_add(eb).expect("exponent overflow");
                    if !keep(k, &e) {
                        continue;
                    }
                    *next.entry(e).or_default() += ca * cb;
                }
            }
            next.retain(|_, c| !c.is_zero());
            acc = next;
        }
        if i == 0 {
            acc.retain(|e, _| keep(0, e));
        }
        Self {
            dim: self.dim,
            terms: acc.into_iter().collect(),
        }
    }

    /// Convex hull of the exponent set.
    pub fn newton_polytope(&self) -> Result<LatticePolytope> {
        if self.terms.is_empty() {
            return Err(Error::DegenerateInput("zero polynomial".into()));
        }
        LatticePolytope::convex_hull(&self.exponents())
    }

    /// Monomial change of variables `x^e ↦ x^(U·e)`.
    pub fn substitute_monomial(&self, u: &UnimodularMap) -> Result<Self> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: u.dim(),
            });
        }
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            out.add_term(u.apply(e)?, c.clone());
        }
        Ok(out)
    }

    /// Multiply by the monomial `x^e`.
    pub fn shift(&self, e: &LatticeVector) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(
                k.checked_add(e).ok_or(Error::Overflow("exponent shift"))?,
                c.clone(),
            );
        }
        Ok(Self {
            dim: self.dim,
            terms,
        })
    }

    /// Terms whose `axis` exponent equals `level`, with that exponent zeroed.
    pub fn level(&self, axis: usize, level: i64) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.get(axis) == level)
                .map(|(e, c)| (e.with(axis, 0), c.clone()))
                .collect(),
        }
    }

    /// Distinct values taken by the `axis` exponent.
    pub fn axis_exponents(&self, axis: usize) -> Vec<i64> {
        let mut v: Vec<i64> = self.terms.keys().map(|e| e.get(axis)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Exact quotient `self / divisor`, if it exists as a Laurent polynomial.
    pub fn exact_div(&self, divisor: &Self) -> Result<Option<Self>> {
        self.check_dim(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DegenerateInput("division by zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Some(Self::zero(self.dim)));
        }
        // Quotient exponents are confined to the box max(self)-max(d) ..= min(self)-min(d).
        let (slo, shi) = self.exponent_box();
        let (dlo, dhi) = divisor.exponent_box();
        let (lead_e, lead_c) = divisor.terms.iter().next_back().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.dim);
        while let Some((re, rc)) = rem.terms.iter().next_back() {
            let e = re
                .checked_sub(lead_e)
                .ok_or(Error::Overflow("exponent difference"))?;
            let inside =
                (0..self.dim).all(|i| e.get(i) >= slo[i] - dlo[i] && e.get(i) <= shi[i] - dhi[i]);
            if !inside {
                return Ok(None);
            }
            let (q, r) = rc.div_rem(lead_c);
            if !r.is_zero() {
                return Ok(None);
            }
            let step = divisor.shift(&e)?.scalar_mul(&q);
            rem = rem.sub(&step)?;
            quot.add_term(e, q);
        }
        Ok(Some(quot))
    }

    fn exponent_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.dim];
        let mut hi = vec![i64::MIN; self.dim];
        for e in self.terms.keys() {
            for i in 0..self.dim {
                lo[i] = lo[i].min(e.get(i));
                hi[i] = hi[i].max(e.get(i));
            }
        }
        (lo, hi)
    }

    /// Whether `self = ±x^e · other` for some monomial.
    pub fn equal_up_to_unit(&self, other: &Self) -> bool {
        if self.dim != other.dim || self.len() != other.len() {
            return false;
        }
        let (Some((ea, ca)), Some((eb, cb))) =
            (self.terms.iter().next(), other.terms.iter().next())
        else {
            return self.is_zero() && other.is_zero();
        };
        let Some(shift) = ea.checked_sub(eb) else {
            return false;
        };
        let sign = if ca.is_negative() == cb.is_negative() {
            1
        } else {
            -1
        };
        match other.shift(&shift) {
            Ok(moved) => moved.scalar_mul(&BigInt::from(sign)) == *self,
            Err(_) => false,
        }
    }

    /// Lowest term moved to the origin with a positive coefficient.
    pub fn normalize_unit(&self) -> Self {
        let Some((e, c)) = self.terms.iter().next() else {
            return self.clone();
        };
        let sign = if c.is_negative() { -1 } else { 1 };
        self.shift(&-*e)
            .expect("shifting by an existing exponent")
            .scalar_mul(&BigInt::from(sign))
    }
}

impl std::ops::Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: Self) -> LaurentPolynomial {
        LaurentPolynomial::add(self, rhs).expect("dimension mismatch")
    }
}

impl std::ops::Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: Self) -> LaurentPolynomial {
        LaurentPolynomial::sub(self, rhs).expect("dimension mismatch")
    }
}

impl std::ops::Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: Self) -> LaurentPolynomial {
        LaurentPolynomial::mul(self, rhs).expect("dimension mismatch")
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Expression syntax accepted by [`parse`], highest exponent first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = (0..self.dim)
                .filter(|&k| e.get(k) != 0)
                .map(|k| match e.get(k) {
                    1 => VARIABLES[k].to_string(),
                    p => format!("{}^{}", VARIABLES[k], p),
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPolynomial[{}]({})", self.dim, self)
    }
}
