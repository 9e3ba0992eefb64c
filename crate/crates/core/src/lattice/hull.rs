//! Exact convex hulls in dimensions 2 and 3.
//!
//! 2D uses a monotone chain with exact cross products. 3D enumerates the
//! supporting planes spanned by point triples; the inputs here are exponent
//! sets and small lattice polytopes, so the quartic cost never matters.

use std::collections::BTreeSet;

use super::polytope::Facet;
use super::vector::{narrow, primitive_wide, LatticeVector};
use crate::error::{Error, Result};

pub(crate) struct Hull {
    pub vertices: Vec<LatticeVector>,
    pub facets: Vec<Facet>,
}

pub(crate) fn hull(points: &[LatticeVector]) -> Result<Hull> {
    let dim = match points.first() {
        Some(p) => p.dim(),
        None => return Err(Error::DegenerateInput("empty point set".into())),
    };
    if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let mut pts: Vec<LatticeVector> = points.to_vec();
    pts.sort();
    pts.dedup();
    match dim {
        2 => hull2(&pts),
        3 => hull3(&pts),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

fn cross2(o: &LatticeVector, a: &LatticeVector, b: &LatticeVector) -> i128 {
    let oa = LatticeVector::v2(a.get(0) - o.get(0), a.get(1) - o.get(1));
    let ob = LatticeVector::v2(b.get(0) - o.get(0), b.get(1) - o.get(1));
    oa.det2(&ob)
}

/// Strictly convex vertices of a planar point set in counter-clockwise order,
/// starting from the lexicographically smallest point. Input must be sorted.
pub(crate) fn monotone_chain(sorted: &[LatticeVector]) -> Vec<LatticeVector> {
    if sorted.len() < 3 {
        return sorted.to_vec();
    }
    let mut lower: Vec<LatticeVector> = Vec::new();
    for p in sorted {
        while lower.len() >= 2 && cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<LatticeVector> = Vec::new();
    for p in sorted.iter().rev() {
        while upper.len() >= 2 && cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn hull2(pts: &[LatticeVector]) -> Result<Hull> {
    let ring = monotone_chain(pts);
    if ring.len() < 3 {
        return Err(Error::DegenerateInput(
            "points do not span the plane".into(),
        ));
    }
    let mut facets = Vec::with_capacity(ring.len());
    for i in 0..ring.len() {
        let a = ring[i];
        let b = ring[(i + 1) % ring.len()];
        // Counter-clockwise ring: the interior lies to the left of a→b.
        let d = [
            (b.get(0) - a.get(0)) as i128,
            (b.get(1) - a.get(1)) as i128,
            0,
        ];
        let normal = primitive_wide([-d[1], d[0], 0], 2)?;
        let offset = narrow(-normal.dot(&a), "facet offset")?;
        facets.push(Facet { normal, offset });
    }
    facets.sort();
    let mut vertices = ring;
    vertices.sort();
    Ok(Hull { vertices, facets })
}

fn hull3(pts: &[LatticeVector]) -> Result<Hull> {
    let n = pts.len();
    let mut found: BTreeSet<Facet> = BTreeSet::new();
    let mut spans_space = false;
    for i in 0..n {
        for j in i + 1..n {
            let ab = pts[j] - pts[i];
            for k in j + 1..n {
                let ac = pts[k] - pts[i];
                let c = ab.cross_wide(&ac);
                if c == [0, 0, 0] {
                    continue;
                }
                let normal = primitive_wide(c, 3)?;
                let h = normal.dot(&pts[i]);
                let mut below = false;
                let mut above = false;
                for p in pts {
                    let v = normal.dot(p);
                    if v < h {
                        below = true;
                    } else if v > h {
                        above = true;
                    }
                    if below && above {
                        break;
                    }
                }
                if below || above {
                    spans_space = true;
                }
                match (below, above) {
                    (false, true) => {
                        found.insert(Facet {
                            normal,
                            offset: narrow(-h, "facet offset")?,
                        });
                    }
                    (true, false) => {
                        found.insert(Facet {
                            normal: -normal,
                            offset: narrow(h, "facet offset")?,
                        });
                    }
                    _ => {}
                }
            }
        }
    }
    if !spans_space || found.len() < 4 {
        return Err(Error::DegenerateInput("points do not span 3-space".into()));
    }
    let facets: Vec<Facet> = found.into_iter().collect();
    let vertices = pts
        .iter()
        .filter(|p| {
            let normals: Vec<&LatticeVector> = facets
                .iter()
                .filter(|f| f.value(p) == 0)
                .map(|f| &f.normal)
                .collect();
            has_rank3(&normals)
        })
        .copied()
        .collect();
    Ok(Hull { vertices, facets })
}

fn has_rank3(normals: &[&LatticeVector]) -> bool {
    let n = normals.len();
    for i in 0..n {
        for j in i + 1..n {
            let c = normals[i].cross_wide(normals[j]);
            if c == [0, 0, 0] {
                continue;
            }
            for k in normals.iter().skip(j + 1) {
                let d: i128 = (0..3).map(|t| c[t] * k.get(t) as i128).sum();
                if d != 0 {
                    return true;
                }
            }
        }
    }
    false
}
