//! Reflexive polygons and their toric blow-ups.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{LatticePolytope, LatticeVector, NormalForm};

/// Half-width of the coordinate box searched for polygon vertices.
pub const ENUMERATION_BOX: i64 = 3;

/// A reflexive polygon up to `GL(2, ℤ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonClass {
    normal_form: NormalForm,
    representative: LatticePolytope,
    degree: u64,
}

impl PolygonClass {
    /// Class of a polygon whose only interior lattice point is the origin.
    pub fn from_polygon(p: &LatticePolytope) -> Result<Self> {
        if p.dim() != 2 {
            return Err(Error::UnsupportedDimension(p.dim()));
        }
        if !has_single_interior_origin(p) {
            return Err(Error::LeavesCanonicalFamily);
        }
        let normal_form = p.normal_form()?;
        Ok(Self {
            representative: normal_form.representative(),
            degree: polygon_degree(p)?,
            normal_form,
        })
    }

    pub fn normal_form(&self) -> &NormalForm {
        &self.normal_form
    }

    /// The polygon spanned by the normal-form columns.
    pub fn representative(&self) -> &LatticePolytope {
        &self.representative
    }

    /// Normalized area of the dual polygon (the anticanonical degree).
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn vertex_count(&self) -> usize {
        self.representative.vertices().len()
    }

    pub fn boundary_points(&self) -> usize {
        let pts = self.representative.lattice_points();
        pts.all - pts.interior
    }

    /// Classes reached by blowing up each smooth vertex cone of the representative.
    pub fn blowups(&self) -> Vec<Result<PolygonClass>> {
        self.representative
            .edges()
            .into_iter()
            .map(|(a, b)| {
                polygon_blowup(&self.representative, &a, &b).and_then(|q| Self::from_polygon(&q))
            })
            .collect()
    }
}

#[derive(Serialize)]
struct PolygonClassJson<'a> {
    degree: u64,
    normal_form: String,
    vertices: &'a [LatticeVector],
    boundary_points: usize,
}

impl Serialize for PolygonClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolygonClassJson {
            degree: self.degree,
            normal_form: self.normal_form.hex(),
            vertices: self.representative.vertices(),
            boundary_points: self.boundary_points(),
        }
        .serialize(s)
    }
}

/// Normalized area of the dual of a polygon with the origin in its interior.
pub fn polygon_degree(p: &LatticePolytope) -> Result<u64> {
    let dual = p.dual()?;
    let vol = dual
        .normalized_volume_integer()
        .ok_or(Error::LeavesCanonicalFamily)?;
    u64::try_from(vol).map_err(|_| Error::Overflow("polygon degree"))
}

fn has_single_interior_origin(p: &LatticePolytope) -> bool {
    p.origin_is_interior() && p.lattice_points().interior == 1
}

/// `conv(P ∪ {v1 + v2})` for an edge `(v1, v2)` spanning a smooth cone.
pub fn polygon_blowup(
    p: &LatticePolytope,
    v1: &LatticeVector,
    v2: &LatticeVector,
) -> Result<LatticePolytope> {
    if p.dim() != 2 {
        return Err(Error::UnsupportedDimension(p.dim()));
    }
    let adjacent = p
        .edges()
        .iter()
        .any(|(a, b)| (a == v1 && b == v2) || (a == v2 && b == v1));
    if !adjacent {
        return Err(Error::NotAdjacent(
            v1.coords().to_vec(),
            v2.coords().to_vec(),
        ));
    }
    let det = v1.det2(v2);
    if det.abs() != 1 {
        return Err(Error::SingularFixedPoint { det: det as i64 });
    }
    let new_vertex = v1
        .checked_add(v2)
        .ok_or(Error::Overflow("blow-up vertex"))?;
    let mut pts = p.vertices().to_vec();
    pts.push(new_vertex);
    let q = LatticePolytope::convex_hull(&pts)?;
    if !has_single_interior_origin(&q) || !q.is_reflexive()? {
        return Err(Error::LeavesCanonicalFamily);
    }
    Ok(q)
}

/// All reflexive polygons up to `GL(2, ℤ)`, by decreasing degree, then normal form.
///
/// Vertex sets are grown from the primitive points of the box
/// `[-3, 3]²`, pruning any set that is not in convex position or whose hull
/// has a lattice point other than the origin in its interior (both
/// properties are inherited by supersets).
pub fn enumerate_reflexive_polygons() -> Vec<PolygonClass> {
    let b = ENUMERATION_BOX;
    let mut candidates: Vec<LatticeVector> = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            let v = LatticeVector::v2(x, y);
            if v.is_primitive() {
                candidates.push(v);
            }
        }
    }
    let mut found: BTreeMap<NormalForm, PolygonClass> = BTreeMap::new();
    let mut chosen = Vec::new();
    grow(&candidates, 0, &mut chosen, &mut found);
    let mut classes: Vec<PolygonClass> = found.into_values().collect();
    classes.sort_by(|a, b| {
        b.degree
            .cmp(&a.degree)
            .then_with(|| a.normal_form.cmp(&b.normal_form))
    });
    classes
}

/// Reflexive polygons have at most six vertices.
const MAX_VERTICES: usize = 6;

fn grow(
    candidates: &[LatticeVector],
    start: usize,
    chosen: &mut Vec<LatticeVector>,
    found: &mut BTreeMap<NormalForm, PolygonClass>,
) {
    for i in start..candidates.len() {
        chosen.push(candidates[i]);
        if admissible(chosen, found) && chosen.len() < MAX_VERTICES {
            grow(candidates, i + 1, chosen, found);
        }
        chosen.pop();
    }
}

/// Whether `chosen` may still be extended; records complete polygons.
fn admissible(chosen: &[LatticeVector], found: &mut BTreeMap<NormalForm, PolygonClass>) -> bool {
    if chosen.len() < 3 {
        return true;
    }
    let Ok(hull) = LatticePolytope::convex_hull(chosen) else {
        // Collinear so far.
        return true;
    };
    if hull.vertices().len() != chosen.len() {
        return false;
    }
    let pts = hull.lattice_points();
    let origin = LatticeVector::zero(2);
    let stray_interior = pts
        .points
        .iter()
        .any(|p| *p != origin && hull.contains_interior(p));
    if stray_interior {
        return false;
    }
    if hull.origin_is_interior() {
        if let Ok(class) = PolygonClass::from_polygon(&hull) {
            found.entry(class.normal_form.clone()).or_insert(class);
        }
    }
    true
}
