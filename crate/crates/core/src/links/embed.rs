//! Search for a unimodular map carrying one polytope into another.

use crate::lattice::{IntMatrix, LatticePolytope, LatticeVector, UnimodularMap};

/// Some linear `U ∈ GL(n, ℤ)` with `U(p) ⊆ q`, if one exists.
///
/// A basis of vertices of `p` must land on lattice points of `q`, so every
/// ordered tuple of non-zero points of `q` is tried as its image. The search
/// is exhaustive and returns the first map in a fixed order.
pub fn embed_up_to_gl(p: &LatticePolytope, q: &LatticePolytope) -> Option<UnimodularMap> {
    let n = p.dim();
    if q.dim() != n {
        return None;
    }
    let q_points = q.lattice_points();
    if p.lattice_points().all > q_points.all {
        return None;
    }
    let targets: Vec<LatticeVector> = q_points
        .points
        .into_iter()
        .filter(|v| !v.is_zero())
        .collect();
    let basis = independent_vertices(p)?;
    let v = IntMatrix::from_rows(
        (0..n)
            .map(|i| basis.iter().map(|b| i128::from(b.get(i))).collect())
            .collect(),
    );
    let det = v.det();
    let adj = v.adjugate();
    let mut choice = vec![0usize; n];
    search(0, &mut choice, &targets, &adj, det, p, q)
}

fn search(
    depth: usize,
    choice: &mut Vec<usize>,
    targets: &[LatticeVector],
    adj: &IntMatrix,
    det: i128,
    p: &LatticePolytope,
    q: &LatticePolytope,
) -> Option<UnimodularMap> {
    let n = choice.len();
    if depth == n {
        return candidate(choice, targets, adj, det, p, q);
    }
    for i in 0..targets.len() {
        if choice[..depth].contains(&i) {
            continue;
        }
        choice[depth] = i;
        if let Some(u) = search(depth + 1, choice, targets, adj, det, p, q) {
            return Some(u);
        }
    }
    None
}

fn candidate(
    choice: &[usize],
    targets: &[LatticeVector],
    adj: &IntMatrix,
    det: i128,
    p: &LatticePolytope,
    q: &LatticePolytope,
) -> Option<UnimodularMap> {
    let n = choice.len();
    let w = IntMatrix::from_rows(
        (0..n)
            .map(|i| {
                choice
                    .iter()
                    .map(|&c| i128::from(targets[c].get(i)))
                    .collect()
            })
            .collect(),
    );
    // U = W · V⁻¹ = W · adj(V) / det(V).
    let scaled = w.mul(adj);
    let mut rows = Vec::with_capacity(n);
    for r in &scaled.rows {
        let mut row = Vec::with_capacity(n);
        for &x in r {
            if x % det != 0 {
                return None;
            }
            row.push(i64::try_from(x / det).ok()?);
        }
        rows.push(row);
    }
    let u = UnimodularMap::new(rows).ok()?;
    p.vertices()
        .iter()
        .all(|v| u.apply(v).is_ok_and(|img| q.contains(&img)))
        .then_some(u)
}

/// Linearly independent vertices with the smallest non-zero |det|.
fn independent_vertices(p: &LatticePolytope) -> Option<Vec<LatticeVector>> {
    let verts = p.vertices();
    let n = p.dim();
    let mut best: Option<(i128, Vec<LatticeVector>)> = None;
    let mut consider = |tuple: Vec<LatticeVector>| {
        let m = IntMatrix::from_rows(
            (0..n)
                .map(|i| tuple.iter().map(|b| i128::from(b.get(i))).collect())
                .collect(),
        );
        let d = m.det().abs();
        if d != 0 && best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, tuple));
        }
    };
    for a in 0..verts.len() {
        for b in a + 1..verts.len() {
            if n == 2 {
                consider(vec![verts[a], verts[b]]);
                continue;
            }
            for c in b + 1..verts.len() {
                consider(vec![verts[a], verts[b], verts[c]]);
            }
        }
    }
    best.map(|(_, t)| t)
}
