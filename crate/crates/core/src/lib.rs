//! Verification toolkit for toric Landau–Ginzburg models of Fano threefolds.
//!
//! The crate checks, with exact integer arithmetic throughout, the
//! combinatorial and arithmetic claims attached to a catalog of Laurent
//! polynomials: reflexivity and degrees of Newton polytopes, period
//! sequences, mutations, and the graphs of basic links between toric Fano
//! threefolds and between toric del Pezzo surfaces.

pub mod catalog;
pub mod error;
pub mod lattice;
pub mod laurent;
pub mod links;
pub mod mutation;
pub mod par;
pub mod period;

pub use error::{Error, Result};
pub use lattice::{LatticePolytope, LatticeVector, NormalForm, RationalPolytope, UnimodularMap};
pub use laurent::LaurentPolynomial;
pub use par::Parallelism;
