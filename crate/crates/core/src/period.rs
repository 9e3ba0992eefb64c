//! Period sequences `a_i = [f^i]_0` with pruned powering.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::{hermite, Facet, IntMatrix, LatticeVector};
use crate::laurent::LaurentPolynomial;
use crate::par::{self, Parallelism};

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "LG_CACHE_DIR";

/// Where a sequence came from: SHA-256 of the canonical term list, and depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodSource {
    pub hash: String,
    pub depth: u32,
}

/// Prefix `[a_0, ..., a_N]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSequence {
    pub values: Vec<BigInt>,
    pub source: PeriodSource,
}

impl PeriodSequence {
    pub fn depth(&self) -> u32 {
        self.source.depth
    }

    pub fn to_file(&self) -> PeriodFile {
        PeriodFile {
            n: self.source.depth,
            values: self.values.iter().map(BigInt::to_string).collect(),
        }
    }
}

/// On-disk shape shared by cache entries and reference inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodFile {
    #[serde(rename = "N")]
    pub n: u32,
    pub values: Vec<String>,
}

impl PeriodFile {
    pub fn parse_values(&self) -> Result<Vec<BigInt>> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.parse().map_err(|_| Error::Parse {
                    offset: i,
                    message: format!("value {i} is not a decimal integer: {s:?}"),
                })
            })
            .collect()
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            offset: e.column(),
            message: e.to_string(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodOptions {
    pub prune: bool,
    pub parallelism: Parallelism,
}

impl Default for PeriodOptions {
    fn default() -> Self {
        Self {
            prune: true,
            parallelism: Parallelism::default(),
        }
    }
}

/// SHA-256 hex digest of the canonical term list.
pub fn polynomial_hash(f: &LaurentPolynomial) -> String {
    hex::encode(Sha256::digest(f.canonical_json().as_bytes()))
}

pub fn period_sequence(f: &LaurentPolynomial, n: u32) -> PeriodSequence {
    period_sequence_with(f, n, PeriodOptions::default())
}

pub fn period_sequence_with(f: &LaurentPolynomial, n: u32, opts: PeriodOptions) -> PeriodSequence {
    let source = PeriodSource {
        hash: polynomial_hash(f),
        depth: n,
    };
    let mut values = vec![BigInt::one()];
    let facets = if opts.prune {
        pruning_facets(f)
    } else {
        Pruning::Off
    };
    if let Pruning::Unreachable = facets {
        values.resize(n as usize + 1, BigInt::zero());
        return PeriodSequence { values, source };
    }
    let factors: Vec<(LatticeVector, BigInt)> = f.terms().map(|(e, c)| (*e, c.clone())).collect();
    let origin = LatticeVector::zero(f.dim());
    let mut acc: Vec<(LatticeVector, BigInt)> = vec![(origin, BigInt::one())];
    for k in 1..=n {
        let remaining = i128::from(n - k);
        let keep = |e: &LatticeVector| match &facets {
            Pruning::Facets(fs) => fs
                .iter()
                .all(|ft| ft.normal.dot(e) <= remaining * i128::from(ft.offset)),
            _ => true,
        };
        let next = multiply_step(&acc, &factors, &keep, opts.parallelism);
        values.push(next.get(&origin).cloned().unwrap_or_default());
        acc = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        acc.sort_unstable_by_key(|a| a.0);
    }
    PeriodSequence { values, source }
}

enum Pruning {
    Off,
    Facets(Vec<Facet>),
    /// The origin is outside the Newton polytope: `a_i = 0` for `i ≥ 1`.
    Unreachable,
}

fn pruning_facets(f: &LaurentPolynomial) -> Pruning {
    if f.is_zero() {
        return Pruning::Unreachable;
    }
    match f.newton_polytope() {
        Ok(p) => {
            let origin = LatticeVector::zero(f.dim());
            if p.contains(&origin) {
                Pruning::Facets(p.facets().to_vec())
            } else {
                Pruning::Unreachable
            }
        }
        Err(_) => Pruning::Off,
    }
}

const CHUNK: usize = 512;

fn multiply_step(
    acc: &[(LatticeVector, BigInt)],
    factors: &[(LatticeVector, BigInt)],
    keep: &(dyn Fn(&LatticeVector) -> bool + Sync),
    mode: Parallelism,
) -> HashMap<LatticeVector, BigInt> {
    let fold = |chunk: &[(LatticeVector, BigInt)]| {
        let mut out: HashMap<LatticeVector, BigInt> = HashMap::with_capacity(chunk.len() * 2);
        for (ea, ca) in chunk {
            for (eb, cb) in factors {
                let e = ea.checked_add(eb).expect("exponent overflow");
                if keep(&e) {
                    *out.entry(e).or_default() += ca * cb;
                }
            }
        }
        out
    };
    let merge = |mut a: HashMap<LatticeVector, BigInt>, mut b: HashMap<LatticeVector, BigInt>| {
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        for (e, c) in b {
            *a.entry(e).or_default() += c;
        }
        a
    };
    par::fold_chunks(acc, CHUNK, mode, fold, merge).unwrap_or_default()
}

/// Result of comparing two prefixes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodComparison {
    pub equal: bool,
    pub first_mismatch: Option<usize>,
}

pub fn period_equal(
    f: &LaurentPolynomial,
    g: &LaurentPolynomial,
    n: u32,
) -> Result<PeriodComparison> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: g.dim(),
        });
    }
    let a = period_sequence(f, n).values;
    let b = period_sequence(g, n).values;
    Ok(compare_values(&a, &b))
}

pub fn compare_values(a: &[BigInt], b: &[BigInt]) -> PeriodComparison {
    let first_mismatch = a.iter().zip(b).position(|(x, y)| x != y);
    PeriodComparison {
        equal: first_mismatch.is_none(),
        first_mismatch,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexCheck {
    pub index: usize,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReferenceReport {
    pub pass: bool,
    pub first_mismatch: Option<usize>,
    pub entries: Vec<IndexCheck>,
    pub warnings: Vec<String>,
}

/// Compare `f`'s periods with a user-supplied prefix over their common length.
pub fn check_reference(f: &LaurentPolynomial, reference: &[BigInt]) -> ReferenceReport {
    let mut warnings = Vec::new();
    if reference.is_empty() {
        warnings.push("empty reference sequence: nothing compared".to_string());
        return ReferenceReport {
            pass: true,
            first_mismatch: None,
            entries: Vec::new(),
            warnings,
        };
    }
    let depth = (reference.len() - 1) as u32;
    let computed = period_sequence(f, depth).values;
    if computed.len() != reference.len() {
        warnings.push(format!(
            "length mismatch: reference has {} values, computed {}; comparing common prefix",
            reference.len(),
            computed.len()
        ));
    }
    let entries: Vec<IndexCheck> = reference
        .iter()
        .zip(&computed)
        .enumerate()
        .map(|(index, (r, c))| IndexCheck {
            index,
            expected: r.to_string(),
            computed: c.to_string(),
            ok: r == c,
        })
        .collect();
    let first_mismatch = entries.iter().position(|e| !e.ok);
    ReferenceReport {
        pass: first_mismatch.is_none(),
        first_mismatch,
        entries,
        warnings,
    }
}

/// Same as [`check_reference`] for a reference that carries its own depth.
pub fn check_reference_file(
    f: &LaurentPolynomial,
    reference: &PeriodFile,
) -> Result<ReferenceReport> {
    let values = reference.parse_values()?;
    let mut report = check_reference(f, &values);
    if values.len() != reference.n as usize + 1 {
        report.warnings.push(format!(
            "length mismatch: reference declares N={} but lists {} values",
            reference.n,
            values.len()
        ));
    }
    Ok(report)
}

/// Smallest `d ≥ 1` such that `a_i = 0` unless `d | i`, from the exponent lattice.
///
/// `i·e_0` must lie in the lattice spanned by differences of exponents for the
/// constant term of `f^i` to be reachable. `None` means no `i ≥ 1` qualifies.
pub fn support_modulus(f: &LaurentPolynomial) -> Option<u64> {
    let exps = f.exponents();
    let (e0, rest) = exps.split_first()?;
    let rows: Vec<Vec<i128>> = rest
        .iter()
        .map(|e| {
            (0..f.dim())
                .map(|i| i128::from(e.get(i) - e0.get(i)))
                .collect()
        })
        .collect();
    let basis: Vec<Vec<i128>> = if rows.is_empty() {
        Vec::new()
    } else {
        let (h, rank) = hermite(&IntMatrix::from_rows(rows));
        h.rows.into_iter().take(rank).collect()
    };
    let bound: i128 = basis
        .iter()
        .map(|r| r.iter().copied().find(|&x| x != 0).unwrap_or(1))
        .product::<i128>()
        .max(1);
    (1..=bound)
        .find(|&d| {
            let v: Vec<i128> = (0..f.dim()).map(|i| d * i128::from(e0.get(i))).collect();
            in_row_lattice(&basis, v)
        })
        .map(|d| d as u64)
}

fn in_row_lattice(basis: &[Vec<i128>], mut v: Vec<i128>) -> bool {
    for row in basis {
        let Some(p) = row.iter().position(|&x| x != 0) else {
            continue;
        };
        if v[p] % row[p] != 0 {
            return false;
        }
        let q = v[p] / row[p];
        for (a, b) in v.iter_mut().zip(row) {
            *a -= q * b;
        }
    }
    v.iter().all(|&x| x == 0)
}

/// Advisory on-disk cache keyed by `(term list, N)`.
#[derive(Clone, Debug)]
pub struct PeriodCache {
    dir: PathBuf,
}

impl PeriodCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Cache rooted at `$LG_CACHE_DIR`, if set and non-empty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(f: &LaurentPolynomial, n: u32) -> String {
        let mut h = Sha256::new();
        h.update(f.canonical_json().as_bytes());
        h.update(b"\n");
        h.update(n.to_string().as_bytes());
        hex::encode(h.finalize())
    }

    pub fn path(&self, f: &LaurentPolynomial, n: u32) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(f, n)))
    }

    /// Cached entry, or `None` if missing or unreadable.
    pub fn get(&self, f: &LaurentPolynomial, n: u32) -> Option<PeriodSequence> {
        let file = PeriodFile::read(&self.path(f, n)).ok()?;
        let values = file.parse_values().ok()?;
        if file.n != n || values.len() != n as usize + 1 {
            return None;
        }
        Some(PeriodSequence {
            values,
            source: PeriodSource {
                hash: polynomial_hash(f),
                depth: n,
            },
        })
    }

    /// Atomically write an entry (temp file in the same directory, then rename).
    pub fn put(&self, f: &LaurentPolynomial, seq: &PeriodSequence) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(f, seq.depth());
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &seq.to_file()).map_err(|e| Error::Io(e.to_string()))?;
        tmp.persist(&path)
            .map_err(|e| Error::Io(e.error.to_string()))?;
        Ok(path)
    }

    pub fn get_or_compute(&self, f: &LaurentPolynomial, n: u32) -> Result<PeriodSequence> {
        if let Some(hit) = self.get(f, n) {
            return Ok(hit);
        }
        let seq = period_sequence(f, n);
        self.put(f, &seq)?;
        Ok(seq)
    }
}
