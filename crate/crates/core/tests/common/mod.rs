//! Test-only oracles, written without the library's arithmetic.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use toric_lg::LaurentPolynomial;

type Dense = BTreeMap<Vec<i64>, BigInt>;

fn to_dense(f: &LaurentPolynomial) -> Dense {
    f.terms()
        .map(|(e, c)| (e.coords().to_vec(), c.clone()))
        .collect()
}

fn naive_mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Constant terms of f^0..f^n by full unpruned powering.
pub fn naive_periods(f: &LaurentPolynomial, n: u32) -> Vec<BigInt> {
    let base = to_dense(f);
    let origin = vec![0i64; f.dim()];
    let mut power: Dense = [(origin.clone(), BigInt::from(1))].into_iter().collect();
    let mut out = vec![BigInt::from(1)];
    for _ in 0..n {
        power = naive_mul(&power, &base);
        out.push(power.get(&origin).cloned().unwrap_or_default());
    }
    out
}

pub fn ints(values: &[i64]) -> Vec<BigInt> {
    values.iter().map(|&v| BigInt::from(v)).collect()
}
