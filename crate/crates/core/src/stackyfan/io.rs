use std::fmt::Write;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::cone::{Face, IdealCone};
use super::fan::{Cell, LatticeMap, StackyFan};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellData {
    pub label: String,
    pub ambient_dim: usize,
    #[serde(with = "crate::ratlin::int_vecs")]
    pub rays: Vec<Vec<BigInt>>,
    /// Maximal removed faces, as ray indices.
    #[serde(default)]
    pub removed: Vec<Face>,
}

/// Interchange form of a stacky fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanData {
    pub cells: Vec<CellData>,
    pub maps: Vec<LatticeMap>,
}

impl FanData {
    pub fn from_fan(fan: &StackyFan) -> Self {
        let cells = fan
            .cells
            .iter()
            .map(|c| {
                let removed = c.cone.removed_faces();
                let maximal = removed
                    .iter()
                    .filter(|f| !removed.iter().any(|g| g.len() > f.len() && f.iter().all(|x| g.contains(x))))
                    .cloned()
                    .collect();
                CellData { label: c.label.clone(), ambient_dim: c.cone.ambient_dim(), rays: c.cone.rays().to_vec(), removed: maximal }
            })
            .collect();
        FanData { cells, maps: fan.maps.clone() }
    }

    pub fn to_fan(&self) -> Result<StackyFan> {
        let cells = self
            .cells
            .iter()
            .map(|c| Ok(Cell { label: c.label.clone(), cone: IdealCone::new(c.ambient_dim, &c.rays, &c.removed)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(StackyFan::new(cells, self.maps.clone()))
    }
}

/// DOT of the stacky-face poset: one node per cell, one edge per pair of
/// cells joined by a non-self face map.
pub fn fan_to_dot(fan: &StackyFan, name: &str) -> String {
    let mut out = format!("digraph {name} {{\n  rankdir=BT;\n");
    for (i, c) in fan.cells.iter().enumerate() {
        let _ = writeln!(out, "  c{i} [label=\"{} (dim {})\"];", c.label.replace('"', "'"), c.cone.dim());
    }
    let mut pairs: Vec<(usize, usize)> = fan.maps.iter().filter(|m| !m.is_self_map()).map(|m| (m.source, m.target)).collect();
    pairs.sort_unstable();
    pairs.dedup();
    for (s, t) in pairs {
        let _ = writeln!(out, "  c{s} -> c{t};");
    }
    out.push_str("}\n");
    out
}
