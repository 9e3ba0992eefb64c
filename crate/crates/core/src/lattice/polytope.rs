use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::hull::{hull, monotone_chain};
use super::normal_form::NormalForm;
use super::unimodular::UnimodularMap;
use super::vector::{narrow, LatticeVector};
use crate::error::{Error, Result};

/// Half-space `⟨normal, x⟩ ≥ −offset` with a primitive inward normal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub normal: LatticeVector,
    pub offset: i64,
}

impl Facet {
    /// Lattice distance of `p` from the facet hyperplane (≥ 0 inside).
    #[inline]
    pub fn value(&self, p: &LatticeVector) -> i128 {
        self.normal.dot(p) + self.offset as i128
    }

    pub fn contains(&self, p: &LatticeVector) -> bool {
        self.value(p) >= 0
    }
}

/// A full-dimensional lattice polytope with both vertex and facet descriptions.
///
/// Vertices are kept in lexicographic order and facets sorted by
/// `(normal, offset)`, so two values are equal iff the polytopes coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<LatticeVector>,
    facets: Vec<Facet>,
}

/// Lattice-point census of a polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoints {
    pub all: usize,
    pub interior: usize,
    pub points: Vec<LatticeVector>,
}

impl LatticePolytope {
    /// Convex hull of a finite point set.
    pub fn convex_hull(points: &[LatticeVector]) -> Result<Self> {
        let h = hull(points)?;
        Ok(Self {
            dim: points[0].dim(),
            vertices: h.vertices,
            facets: h.facets,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn contains(&self, p: &LatticeVector) -> bool {
        self.facets.iter().all(|f| f.contains(p))
    }

    pub fn contains_interior(&self, p: &LatticeVector) -> bool {
        self.facets.iter().all(|f| f.value(p) > 0)
    }

    pub fn contains_polytope(&self, other: &LatticePolytope) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    pub fn origin_is_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset > 0)
    }

    fn require_origin_interior(&self) -> Result<()> {
        if self.origin_is_interior() {
            Ok(())
        } else {
            Err(Error::OriginNotInterior)
        }
    }

    /// Polar dual `{u : ⟨u, v⟩ ≥ −1 for every vertex v}`.
    pub fn dual(&self) -> Result<RationalPolytope> {
        self.require_origin_interior()?;
        polar_from_facets(&self.facets, 1)
    }

    /// Reflexive iff the dual is a lattice polytope.
    pub fn is_reflexive(&self) -> Result<bool> {
        Ok(self.dual()?.is_integral())
    }

    /// `dim!` times the Euclidean volume.
    pub fn normalized_volume(&self) -> u64 {
        match self.dim {
            2 => twice_area(&self.vertices) as u64,
            _ => six_volume(&self.vertices, &self.facets) as u64,
        }
    }

    /// Enumerate lattice points inside the bounding box and filter by facets.
    pub fn lattice_points(&self) -> LatticePoints {
        let (lo, hi) = self.bounding_box();
        enumerate_box(self.dim, &lo, &hi, |p| {
            let mut interior = true;
            for f in &self.facets {
                let v = f.value(p);
                if v < 0 {
                    return None;
                }
                if v == 0 {
                    interior = false;
                }
            }
            Some(interior)
        })
    }

    fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.dim];
        let mut hi = vec![i64::MIN; self.dim];
        for v in &self.vertices {
            for i in 0..self.dim {
                lo[i] = lo[i].min(v.get(i));
                hi[i] = hi[i].max(v.get(i));
            }
        }
        (lo, hi)
    }

    /// Image under a unimodular map, re-hulled.
    pub fn apply_unimodular(&self, u: &UnimodularMap) -> Result<Self> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: u.dim(),
            });
        }
        let images = self
            .vertices
            .iter()
            .map(|v| u.apply(v))
            .collect::<Result<Vec<_>>>()?;
        Self::convex_hull(&images)
    }

    /// Canonical GL(n, ℤ) normal form.
    pub fn normal_form(&self) -> Result<NormalForm> {
        self.require_origin_interior()?;
        NormalForm::compute(self)
    }

    /// Vertices in counter-clockwise order (2D only).
    pub fn cyclic_vertices(&self) -> Vec<LatticeVector> {
        assert_eq!(self.dim, 2, "cyclic order is defined for polygons");
        monotone_chain(&self.vertices)
    }

    /// Pairs of vertices spanning an edge (2D only), in counter-clockwise order.
    pub fn edges(&self) -> Vec<(LatticeVector, LatticeVector)> {
        let ring = self.cyclic_vertices();
        (0..ring.len())
            .map(|i| (ring[i], ring[(i + 1) % ring.len()]))
            .collect()
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            dim: self.dim,
            vertices: self.vertices.clone(),
        }
    }
}

/// Serialized shape `{"dim": n, "vertices": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<LatticeVector>,
}

impl TryFrom<PolytopeJson> for LatticePolytope {
    type Error = Error;
    fn try_from(j: PolytopeJson) -> Result<Self> {
        if let Some(v) = j.vertices.iter().find(|v| v.dim() != j.dim) {
            return Err(Error::DimensionMismatch {
                expected: j.dim,
                found: v.dim(),
            });
        }
        LatticePolytope::convex_hull(&j.vertices)
    }
}

impl Serialize for LatticePolytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticePolytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolytopeJson::deserialize(d)?;
        LatticePolytope::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Polytope with rational vertices, stored as `scaled / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolytope {
    scaled: LatticePolytope,
    denominator: i64,
}

impl RationalPolytope {
    pub fn dim(&self) -> usize {
        self.scaled.dim
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    /// Vertices as exact rationals, in the order of the scaled polytope.
    pub fn vertices(&self) -> Vec<Vec<BigRational>> {
        let d = BigInt::from(self.denominator);
        self.scaled
            .vertices
            .iter()
            .map(|v| {
                v.coords()
                    .iter()
                    .map(|&c| BigRational::new(BigInt::from(c), d.clone()))
                    .collect()
            })
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.denominator == 1
    }

    /// The same polytope as a lattice polytope, when all vertices are integral.
    pub fn to_lattice(&self) -> Option<LatticePolytope> {
        self.is_integral().then(|| self.scaled.clone())
    }

    pub fn normalized_volume(&self) -> BigRational {
        let num = BigInt::from(self.scaled.normalized_volume());
        let den = BigInt::from(self.denominator).pow(self.dim() as u32);
        BigRational::new(num, den)
    }

    /// Lattice points `y` with `denominator · y` in the scaled polytope.
    pub fn lattice_points(&self) -> LatticePoints {
        let d = self.denominator;
        let (lo, hi) = self.scaled.bounding_box();
        let lo: Vec<i64> = lo.iter().map(|&c| Integer::div_floor(&c, &d)).collect();
        let hi: Vec<i64> = hi.iter().map(|&c| Integer::div_ceil(&c, &d)).collect();
        enumerate_box(self.dim(), &lo, &hi, |p| {
            let mut interior = true;
            for f in &self.scaled.facets {
                let v = f.normal.dot(p) * d as i128 + f.offset as i128;
                if v < 0 {
                    return None;
                }
                if v == 0 {
                    interior = false;
                }
            }
            Some(interior)
        })
    }

    pub fn contains_origin_interior(&self) -> bool {
        self.scaled.origin_is_interior()
    }

    /// Polar dual; for a dual of a lattice polytope this recovers the original.
    pub fn dual(&self) -> Result<RationalPolytope> {
        if !self.scaled.origin_is_interior() {
            return Err(Error::OriginNotInterior);
        }
        polar_from_facets(&self.scaled.facets, self.denominator)
    }
}

/// Polar of `{x : ⟨n, s·x⟩ ≥ −c}`: vertices `n·s / c`.
fn polar_from_facets(facets: &[Facet], s: i64) -> Result<RationalPolytope> {
    let dim = facets[0].normal.dim();
    let denoms: Vec<i64> = facets.iter().map(|f| f.offset / f.offset.gcd(&s)).collect();
    let lcm = denoms.iter().fold(1i64, |acc, d| acc.lcm(d));
    let points = facets
        .iter()
        .map(|f| {
            // n · s · lcm / c, exact because c | s·lcm.
            let factor = (s as i128) * (lcm as i128) / f.offset as i128;
            let mut v = LatticeVector::zero(dim);
            for i in 0..dim {
                v = v.with(i, narrow(f.normal.get(i) as i128 * factor, "dual vertex")?);
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalPolytope {
        scaled: LatticePolytope::convex_hull(&points)?,
        denominator: lcm,
    })
}

fn enumerate_box(
    dim: usize,
    lo: &[i64],
    hi: &[i64],
    classify: impl Fn(&LatticeVector) -> Option<bool>,
) -> LatticePoints {
    let mut points = Vec::new();
    let mut interior = 0;
    let mut visit = |p: LatticeVector| {
        if let Some(inner) = classify(&p) {
            if inner {
                interior += 1;
            }
            points.push(p);
        }
    };
    if dim == 2 {
        for a in lo[0]..=hi[0] {
            for b in lo[1]..=hi[1] {
                visit(LatticeVector::v2(a, b));
            }
        }
    } else {
        for a in lo[0]..=hi[0] {
            for b in lo[1]..=hi[1] {
                for c in lo[2]..=hi[2] {
                    visit(LatticeVector::v3(a, b, c));
                }
            }
        }
    }
    LatticePoints {
        all: points.len(),
        interior,
        points,
    }
}

fn twice_area(vertices: &[LatticeVector]) -> i128 {
    let ring = monotone_chain(vertices);
    let n = ring.len();
    let s: i128 = (0..n).map(|i| ring[i].det2(&ring[(i + 1) % n])).sum();
    s.abs()
}

/// Six times the volume, by coning from the first vertex over every facet.
fn six_volume(vertices: &[LatticeVector], facets: &[Facet]) -> i128 {
    let apex = vertices[0];
    let mut total: i128 = 0;
    for f in facets {
        if f.value(&apex) == 0 {
            continue;
        }
        let ring = facet_ring(vertices, f);
        let anchor = ring[0];
        for w in ring[1..].windows(2) {
            let a = anchor - apex;
            let b = w[0] - apex;
            let c = w[1] - apex;
            let det: i128 = a
                .cross_wide(&b)
                .iter()
                .zip(c.coords())
                .map(|(x, &y)| x * y as i128)
                .sum();
            total += det.abs();
        }
    }
    total
}

/// Vertices of a 3D facet in cyclic order around the first of them.
fn facet_ring(vertices: &[LatticeVector], facet: &Facet) -> Vec<LatticeVector> {
    let mut on: Vec<LatticeVector> = vertices
        .iter()
        .filter(|v| facet.value(v) == 0)
        .copied()
        .collect();
    let anchor = on[0];
    let normal = facet.normal;
    on[1..].sort_by(|p, q| {
        let s: i128 = (*p - anchor)
            .cross_wide(&(*q - anchor))
            .iter()
            .zip(normal.coords())
            .map(|(x, &y)| x * y as i128)
            .sum();
        match s.cmp(&0) {
            Ordering::Greater => Ordering::Less,
            Ordering::Less => Ordering::Greater,
            Ordering::Equal => Ordering::Equal,
        }
    });
    on
}

impl RationalPolytope {
    /// Integer volume, if the normalized volume is integral.
    pub fn normalized_volume_integer(&self) -> Option<BigInt> {
        let v = self.normalized_volume();
        v.denom().is_one().then(|| v.numer().clone())
    }
}

impl LatticePolytope {
    /// Lattice points of the polar dual, enumerated straight from the vertex
    /// inequalities of `self`.
    pub fn dual_lattice_points(&self) -> Result<LatticePoints> {
        Ok(self.dual()?.lattice_points())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v3(a: i64, b: i64, c: i64) -> LatticeVector {
        LatticeVector::v3(a, b, c)
    }
    fn v2(a: i64, b: i64) -> LatticeVector {
        LatticeVector::v2(a, b)
    }

    #[test]
    fn hull_drops_interior_origin() {
        let p = LatticePolytope::convex_hull(&[
            v3(1, 0, 0),
            v3(0, 1, 0),
            v3(0, 0, 1),
            v3(-1, -1, -1),
            v3(0, 0, 0),
        ])
        .unwrap();
        assert_eq!(
            p.vertices(),
            &[v3(-1, -1, -1), v3(0, 0, 1), v3(0, 1, 0), v3(1, 0, 0)]
        );
        assert_eq!(p.facets().len(), 4);
        assert!(p.facets().iter().all(|f| f.normal.is_primitive()));
    }

    #[test]
    fn triangle_is_already_extreme() {
        let p = LatticePolytope::convex_hull(&[v2(1, 0), v2(0, 1), v2(-1, -1)]).unwrap();
        assert_eq!(p.vertices(), &[v2(-1, -1), v2(0, 1), v2(1, 0)]);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            LatticePolytope::convex_hull(&[v3(5, 0, 0)]),
            Err(Error::DegenerateInput(_))
        ));
        assert!(matches!(
            LatticePolytope::convex_hull(&[v3(0, 0, 0), v3(1, 0, 0), v3(0, 1, 0), v3(1, 1, 0)]),
            Err(Error::DegenerateInput(_))
        ));
        assert!(matches!(
            LatticePolytope::convex_hull(&[v2(0, 0), v2(1, 1), v2(3, 3)]),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn simplex_dual() {
        let p =
            LatticePolytope::convex_hull(&[v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1), v3(-1, -1, -1)])
                .unwrap();
        let d = p.dual().unwrap();
        assert!(d.is_integral());
        let dl = d.to_lattice().unwrap();
        assert_eq!(
            dl.vertices(),
            &[v3(-1, -1, -1), v3(-1, -1, 3), v3(-1, 3, -1), v3(3, -1, -1)]
        );
        assert_eq!(dl.normalized_volume(), 64);
        assert_eq!(dl.lattice_points().all, 35);
    }

    #[test]
    fn square_cross_polytope_duality() {
        let p = LatticePolytope::convex_hull(&[v2(1, 0), v2(0, 1), v2(-1, 0), v2(0, -1)]).unwrap();
        let d = p.dual().unwrap().to_lattice().unwrap();
        assert_eq!(d.vertices(), &[v2(-1, -1), v2(-1, 1), v2(1, -1), v2(1, 1)]);
        let back = d.dual().unwrap().to_lattice().unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn scaled_triangle_not_reflexive() {
        let p = LatticePolytope::convex_hull(&[v2(2, 0), v2(0, 2), v2(-2, -2)]).unwrap();
        assert!(!p.is_reflexive().unwrap());
        let d = p.dual().unwrap();
        assert_eq!(d.denominator(), 2);
        let verts = d.vertices();
        let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
        assert!(verts.iter().any(|v| v == &vec![half.clone(), half.clone()]));
    }

    #[test]
    fn reflexive_triangle() {
        let p = LatticePolytope::convex_hull(&[v2(1, 0), v2(0, 1), v2(-1, -1)]).unwrap();
        assert!(p.is_reflexive().unwrap());
        let pts = p.lattice_points();
        assert_eq!((pts.all, pts.interior), (4, 1));
    }

    #[test]
    fn origin_must_be_interior() {
        let sq = LatticePolytope::convex_hull(&[v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)]).unwrap();
        assert_eq!(sq.dual(), Err(Error::OriginNotInterior));
        assert_eq!(sq.is_reflexive(), Err(Error::OriginNotInterior));
        let pts = sq.lattice_points();
        assert_eq!((pts.all, pts.interior), (4, 0));
    }

    #[test]
    fn unit_simplex_volume() {
        let p = LatticePolytope::convex_hull(&[v3(0, 0, 0), v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)])
            .unwrap();
        assert_eq!(p.normalized_volume(), 1);
    }

    #[test]
    fn rational_volume() {
        let p = LatticePolytope::convex_hull(&[v2(2, 0), v2(0, 2), v2(-2, -2)]).unwrap();
        // dual is the triangle with vertices (1/2,1/2), (-1/2,0)... of area scaled by 1/4.
        let d = p.dual().unwrap();
        let scaled_by_two = LatticePolytope::convex_hull(&[v2(1, 0), v2(0, 1), v2(-1, -1)])
            .unwrap()
            .dual()
            .unwrap()
            .normalized_volume();
        assert_eq!(
            d.normalized_volume() * BigRational::from_integer(4.into()),
            scaled_by_two
        );
    }

    #[test]
    fn json_shape() {
        let p = LatticePolytope::convex_hull(&[v2(1, 0), v2(0, 1), v2(-1, -1)]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"dim":2,"vertices":[[-1,-1],[0,1],[1,0]]}"#);
        let back: LatticePolytope = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
