//! JSON schema `{"vertices":[{"id","weight"}],"edges":[{"id","ends":[u,v]}]}`
//! and DOT export. Ids must be exactly `0..n` in some order.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::WeightedGraph;
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: usize,
    weight: u32,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: usize,
    ends: [usize; 2],
}

#[derive(Serialize, Deserialize)]
pub(crate) struct GraphJson {
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
}

fn dense<T>(items: Vec<T>, id: impl Fn(&T) -> usize, what: &str) -> Result<Vec<T>> {
    let n = items.len();
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    for it in items {
        let i = id(&it);
        if i >= n || slots[i].is_some() {
            return Err(Error::Parse(format!("{what} ids must be 0..{n} without repeats, found {i}")));
        }
        slots[i] = Some(it);
    }
    Ok(slots.into_iter().map(Option::unwrap).collect())
}

impl TryFrom<GraphJson> for WeightedGraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        let vertices = dense(j.vertices, |v| v.id, "vertex")?;
        let edges = dense(j.edges, |e| e.id, "edge")?;
        WeightedGraph::new(
            vertices.iter().map(|v| v.weight).collect(),
            edges.iter().map(|e| (e.ends[0], e.ends[1])).collect(),
        )
    }
}

impl From<&WeightedGraph> for GraphJson {
    fn from(g: &WeightedGraph) -> Self {
        GraphJson {
            vertices: g.weights().iter().enumerate().map(|(id, &weight)| VertexJson { id, weight }).collect(),
            edges: g.edges().iter().enumerate().map(|(id, &(u, v))| EdgeJson { id, ends: [u, v] }).collect(),
        }
    }
}

impl Serialize for WeightedGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        WeightedGraph::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// DOT rendering with weights as vertex labels and edge ids as edge labels.
pub fn to_dot(g: &WeightedGraph, name: &str) -> String {
    let mut s = format!("graph {name} {{\n");
    for (v, w) in g.weights().iter().enumerate() {
        let _ = writeln!(s, "  v{v} [label=\"{w}\"];");
    }
    for (e, (u, v)) in g.edges().iter().enumerate() {
        let _ = writeln!(s, "  v{u} -- v{v} [label=\"e{e}\"];");
    }
    s.push_str("}\n");
    s
}
