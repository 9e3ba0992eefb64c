//! Exact lattice geometry in dimensions 2 and 3.

mod hnf;
mod hull;
mod normal_form;
mod polytope;
mod unimodular;
mod vector;

pub use hnf::{hermite, hermite_with_transform, IntMatrix};
pub use normal_form::NormalForm;
pub use polytope::{Facet, LatticePoints, LatticePolytope, PolytopeJson, RationalPolytope};
pub use unimodular::UnimodularMap;
pub use vector::LatticeVector;

/// Convex hull of a point set; see [`LatticePolytope::convex_hull`].
pub fn convex_hull(points: &[LatticeVector]) -> crate::Result<LatticePolytope> {
    LatticePolytope::convex_hull(points)
}
