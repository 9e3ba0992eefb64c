//! Canonical representatives of GL(n, ℤ)-orbits of lattice polytopes.
//!
//! Every vertex gets a signature: the multiset of its lattice distances to
//! all facets (a column of the vertex–facet pairing matrix). Signatures are
//! GL-invariant, so vertices are consumed in descending signature order and
//! only orderings inside a signature class are searched. For each admissible
//! ordering the vertex matrix is put in Hermite normal form; the normal form
//! is the lexicographically smallest such matrix. The search runs level by
//! level and keeps only the orderings that tie for the smallest prefix.

use std::fmt;

use super::hnf::{hermite, IntMatrix};
use super::polytope::LatticePolytope;
use super::vector::{narrow, LatticeVector};
use crate::error::Result;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    bytes: Vec<u8>,
    dim: usize,
    columns: Vec<LatticeVector>,
}

impl NormalForm {
    pub(crate) fn compute(p: &LatticePolytope) -> Result<Self> {
        let dim = p.dim();
        let verts = p.vertices();
        let facets = p.facets();

        let signature = |v: &LatticeVector| -> Vec<i128> {
            let mut s: Vec<i128> = facets.iter().map(|f| f.value(v)).collect();
            s.sort_unstable_by(|a, b| b.cmp(a));
            s
        };
        let mut keyed: Vec<(Vec<i128>, usize)> = verts
            .iter()
            .enumerate()
            .map(|(i, v)| (signature(v), i))
            .collect();
        keyed.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut last: Option<&Vec<i128>> = None;
        for (sig, i) in &keyed {
            if last != Some(sig) {
                groups.push(Vec::new());
                last = Some(sig);
            }
            groups.last_mut().unwrap().push(*i);
        }
        let level_group: Vec<usize> = groups
            .iter()
            .enumerate()
            .flat_map(|(g, members)| std::iter::repeat_n(g, members.len()))
            .collect();

        let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
        let mut columns: Vec<Vec<i128>> = Vec::with_capacity(verts.len());
        for &g in &level_group {
            let mut best: Option<Vec<i128>> = None;
            let mut next: Vec<Vec<usize>> = Vec::new();
            for node in &frontier {
                for &cand in &groups[g] {
                    if node.contains(&cand) {
                        continue;
                    }
                    let mut order = node.clone();
                    order.push(cand);
                    let col = last_hermite_column(verts, &order, dim);
                    match best.as_ref().map(|b| col.cmp(b)) {
                        None | Some(std::cmp::Ordering::Less) => {
                            best = Some(col);
                            next.clear();
                            next.push(order);
                        }
                        Some(std::cmp::Ordering::Equal) => next.push(order),
                        Some(std::cmp::Ordering::Greater) => {}
                    }
                }
            }
            columns.push(best.expect("every level has a candidate"));
            frontier = next;
        }

        let columns = columns
            .into_iter()
            .map(|c| {
                let coords = c
                    .iter()
                    .map(|&x| narrow(x, "normal form entry"))
                    .collect::<Result<Vec<i64>>>()?;
                LatticeVector::new(&coords)
            })
            .collect::<Result<Vec<_>>>()?;
        let bytes = encode(dim, &columns);
        Ok(Self {
            bytes,
            dim,
            columns,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertex matrix of the canonical representative, column by column.
    pub fn columns(&self) -> &[LatticeVector] {
        &self.columns
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn hex(&self) -> String {
        hex::encode(&self.bytes)
    }

    /// The canonical representative polytope.
    pub fn representative(&self) -> LatticePolytope {
        LatticePolytope::convex_hull(&self.columns)
            .expect("normal form of a full-dimensional polytope")
    }
}

impl fmt::Debug for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NormalForm({:?})", self.columns)
    }
}

fn last_hermite_column(verts: &[LatticeVector], order: &[usize], dim: usize) -> Vec<i128> {
    let rows = (0..dim)
        .map(|r| order.iter().map(|&i| verts[i].get(r) as i128).collect())
        .collect();
    let (h, _) = hermite(&IntMatrix::from_rows(rows));
    h.column(order.len() - 1)
}

/// Offset-binary big-endian encoding, so byte order matches numeric order.
fn encode(dim: usize, columns: &[LatticeVector]) -> Vec<u8> {
    let mut out = Vec::with_capacity(3 + columns.len() * dim * 8);
    out.push(dim as u8);
    out.extend_from_slice(&(columns.len() as u16).to_be_bytes());
    for c in columns {
        for &x in c.coords() {
            out.extend_from_slice(&((x as u64) ^ (1 << 63)).to_be_bytes());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::UnimodularMap;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(points: &[[i64; 3]]) -> LatticePolytope {
        let pts: Vec<LatticeVector> = points
            .iter()
            .map(|p| LatticeVector::v3(p[0], p[1], p[2]))
            .collect();
        LatticePolytope::convex_hull(&pts).unwrap()
    }

    #[test]
    fn simplex_normal_form_is_hermite() {
        let p = poly(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]]);
        let nf = p.normal_form().unwrap();
        assert_eq!(nf.columns().len(), 4);
        assert_eq!(nf.columns()[0], LatticeVector::v3(1, 0, 0));
        assert_eq!(
            nf.representative().normalized_volume(),
            p.normalized_volume()
        );
    }

    #[test]
    fn invariant_under_random_maps() {
        let cube: Vec<[i64; 3]> = (0..8)
            .map(|i| {
                [
                    (i & 1) * 2 - 1,
                    ((i >> 1) & 1) * 2 - 1,
                    ((i >> 2) & 1) * 2 - 1,
                ]
            })
            .collect();
        let p = poly(&cube);
        let nf = p.normal_form().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let u = UnimodularMap::random(3, 3, &mut rng);
            assert_eq!(p.apply_unimodular(&u).unwrap().normal_form().unwrap(), nf);
        }
    }

    #[test]
    fn distinguishes_inequivalent() {
        let a = poly(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]]);
        let b = poly(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1], [-1, 0, 0]]);
        assert_ne!(a.normal_form().unwrap(), b.normal_form().unwrap());
    }

    #[test]
    fn encoding_orders_like_numbers() {
        let a = encode(2, &[LatticeVector::v2(-1, 0)]);
        let b = encode(2, &[LatticeVector::v2(0, 0)]);
        let c = encode(2, &[LatticeVector::v2(1, 0)]);
        assert!(a < b && b < c);
    }
}
