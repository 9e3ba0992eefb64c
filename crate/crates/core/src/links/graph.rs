//! Link graphs and their DOT rendering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::polygons::{enumerate_reflexive_polygons, PolygonClass};
use crate::catalog::Catalog;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphNode {
    pub id: u32,
    pub label: String,
    pub degree: u64,
    /// Drawn bold (Picard rank one).
    pub bold: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GraphEdge {
    pub from: u32,
    pub to: u32,
    pub label: String,
}

/// A directed graph with nodes ordered by id and edges ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkGraph {
    pub name: String,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

impl LinkGraph {
    pub fn node(&self, id: u32) -> Option<&GraphNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn successors(&self, id: u32) -> Vec<u32> {
        self.edges
            .iter()
            .filter(|e| e.from == id)
            .map(|e| e.to)
            .collect()
    }

    pub fn predecessors(&self, id: u32) -> Vec<u32> {
        self.edges
            .iter()
            .filter(|e| e.to == id)
            .map(|e| e.from)
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        writeln!(out, "digraph \"{}\" {{", self.name).unwrap();
        writeln!(out, "  node [shape=box];").unwrap();
        for n in &self.nodes {
            write!(
                out,
                "  N{} [label=\"N{} {} deg={}\"",
                n.id, n.id, n.label, n.degree
            )
            .unwrap();
            if n.bold {
                write!(out, ", penwidth=3").unwrap();
            }
            writeln!(out, "];").unwrap();
        }
        for e in &self.edges {
            writeln!(out, "  N{} -> N{} [label=\"{}\"];", e.from, e.to, e.label).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Graph of toric blow-ups between the sixteen reflexive polygon classes.
///
/// Nodes are numbered in enumeration order and labelled `S<degree>`, with a
/// letter suffix when several classes share a degree.
pub fn build_del_pezzo_graph() -> LinkGraph {
    build_del_pezzo_graph_from(&enumerate_reflexive_polygons())
}

pub fn build_del_pezzo_graph_from(classes: &[PolygonClass]) -> LinkGraph {
    let index: BTreeMap<_, u32> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.normal_form().clone(), i as u32 + 1))
        .collect();
    let mut per_degree: BTreeMap<u64, usize> = BTreeMap::new();
    for c in classes {
        *per_degree.entry(c.degree()).or_default() += 1;
    }
    let mut seen: BTreeMap<u64, u8> = BTreeMap::new();
    let nodes = classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = seen.entry(c.degree()).or_default();
            let suffix = if per_degree[&c.degree()] > 1 {
                char::from(b'a' + *k).to_string()
            } else {
                String::new()
            };
            *k += 1;
            GraphNode {
                id: i as u32 + 1,
                label: format!("S{}{}", c.degree(), suffix),
                degree: c.degree(),
                bold: false,
            }
        })
        .collect();
    let mut edges = BTreeSet::new();
    for (i, c) in classes.iter().enumerate() {
        for target in c.blowups().into_iter().flatten() {
            if let Some(&j) = index.get(target.normal_form()) {
                edges.insert(GraphEdge {
                    from: i as u32 + 1,
                    to: j,
                    label: "blowup".into(),
                });
            }
        }
    }
    LinkGraph {
        name: "del_pezzo_tree".into(),
        nodes,
        edges: edges.into_iter().collect(),
    }
}

/// Graph of the catalog's recorded links; fails if descendants and parents disagree.
pub fn build_fano_snake(catalog: &Catalog) -> Result<LinkGraph> {
    let mut edges = BTreeSet::new();
    for row in catalog.rows() {
        for (parent, t) in &row.parents {
            edges.insert(GraphEdge {
                from: *parent,
                to: row.id,
                label: t.to_string(),
            });
        }
    }
    for row in catalog.rows() {
        let targets: BTreeSet<u32> = edges
            .iter()
            .filter(|e| e.from == row.id)
            .map(|e| e.to)
            .collect();
        let listed: BTreeSet<u32> = row.descendants.iter().copied().collect();
        if targets != listed {
            return Err(Error::InconsistentCatalog(format!(
                "row {} lists descendants {:?} but is a parent of {:?}",
                row.id, listed, targets
            )));
        }
    }
    let nodes = catalog
        .rows()
        .iter()
        .map(|r| GraphNode {
            id: r.id,
            label: r.fano_label.to_string(),
            degree: r.degree,
            bold: r.fano_label.picard_rank() == 1,
        })
        .collect();
    Ok(LinkGraph {
        name: "fano_snake".into(),
        nodes,
        edges: edges.into_iter().collect(),
    })
}
