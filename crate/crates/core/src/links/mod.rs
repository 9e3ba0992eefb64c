//! Basic links: degree-drop bookkeeping for the threefold table, toric
//! blow-ups of reflexive polygons, and the two link graphs.

mod embed;
mod graph;
mod polygons;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{CatalogRow, Transform};
use crate::error::{Error, Result};
use crate::lattice::{LatticePolytope, UnimodularMap};

pub use embed::embed_up_to_gl;
pub use graph::{build_del_pezzo_graph, build_fano_snake, GraphEdge, GraphNode, LinkGraph};
pub use polygons::{
    enumerate_reflexive_polygons, polygon_blowup, polygon_degree, PolygonClass, ENUMERATION_BOX,
};

/// Type of a basic link between rows of the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LinkType {
    /// Projection from a smooth point.
    #[serde(rename = "II_p")]
    SmoothPoint,
    /// Projection from an ordinary double point.
    #[serde(rename = "II_odp")]
    OrdinaryDoublePoint,
    /// Projection from a compound Du Val point.
    #[serde(rename = "II_cDV")]
    CompoundDuVal,
    /// Projection from a line.
    #[serde(rename = "II_l")]
    Line,
    /// Projection from a conic.
    #[serde(rename = "II_c")]
    Conic,
}

impl LinkType {
    pub const ALL: [LinkType; 5] = [
        LinkType::SmoothPoint,
        LinkType::OrdinaryDoublePoint,
        LinkType::CompoundDuVal,
        LinkType::Line,
        LinkType::Conic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LinkType::SmoothPoint => "II_p",
            LinkType::OrdinaryDoublePoint => "II_odp",
            LinkType::CompoundDuVal => "II_cDV",
            LinkType::Line => "II_l",
            LinkType::Conic => "II_c",
        }
    }

    /// Drop of the anticanonical degree across the link.
    pub fn degree_drop(self) -> u64 {
        match self {
            LinkType::SmoothPoint => 8,
            LinkType::Line => 4,
            LinkType::Conic => 6,
            LinkType::OrdinaryDoublePoint | LinkType::CompoundDuVal => 2,
        }
    }

    /// Projections from a double point (either refinement).
    pub fn is_double_point(self) -> bool {
        matches!(
            self,
            LinkType::OrdinaryDoublePoint | LinkType::CompoundDuVal
        )
    }
}

pub fn degree_drop(t: LinkType) -> u64 {
    t.degree_drop()
}

impl fmt::Display for LinkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LinkType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LinkType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Parse {
                offset: 0,
                message: format!("unknown link type {s:?}"),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkChecks {
    pub drop: bool,
    pub reflexive: bool,
    pub containment: bool,
}

/// How containment was established (or attempted).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Containment {
    Direct,
    RecordedTransform,
    /// Existence of a unimodular map embedding parent into child.
    UpToUnimodular {
        map: Option<UnimodularMap>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkReport {
    pub parent: u32,
    pub child: u32,
    #[serde(rename = "type")]
    pub link_type: LinkType,
    pub checks: LinkChecks,
    pub containment: Containment,
    pub pass: bool,
}

/// Check one edge: degree drop, reflexivity of both Newton polytopes, and
/// containment of the parent's Newton polytope in the child's (through the
/// child's recorded transform, if any).
pub fn verify_link(parent: &CatalogRow, child: &CatalogRow, t: LinkType) -> Result<LinkReport> {
    let drop = parent.degree.checked_sub(child.degree) == Some(t.degree_drop());
    let p_newton = parent.newton_polytope()?;
    let c_newton = child.newton_polytope()?;
    let reflexive = is_reflexive(&p_newton) && is_reflexive(&c_newton);
    let (containment, method) = match &child.transform {
        Transform::None => (c_newton.contains_polytope(&p_newton), Containment::Direct),
        Transform::Matrix(u) => {
            let image = p_newton.apply_unimodular(u)?;
            (
                c_newton.contains_polytope(&image),
                Containment::RecordedTransform,
            )
        }
        Transform::Unknown => {
            let map = embed_up_to_gl(&p_newton, &c_newton);
            (map.is_some(), Containment::UpToUnimodular { map })
        }
    };
    Ok(LinkReport {
        parent: parent.id,
        child: child.id,
        link_type: t,
        checks: LinkChecks {
            drop,
            reflexive,
            containment,
        },
        containment: method,
        pass: drop && reflexive && containment,
    })
}

fn is_reflexive(p: &LatticePolytope) -> bool {
    p.is_reflexive().unwrap_or(false)
}
