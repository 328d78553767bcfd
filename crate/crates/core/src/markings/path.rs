use serde::{Deserialize, Serialize};

use crate::graphs::VirtualGraph;
use crate::{Error, Result};

/// One traversal of an edge: `dir = 1` runs from the stored tail to the
/// head, `dir = -1` backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Step {
    pub edge: usize,
    pub dir: i8,
}

impl Step {
    pub fn new(edge: usize, dir: i8) -> Self {
        Step { edge, dir }
    }

    pub fn inverse(self) -> Self {
        Step { edge: self.edge, dir: -self.dir }
    }

    /// Start and end vertex of the step.
    pub fn ends(self, g: &VirtualGraph) -> (usize, usize) {
        let (u, v) = g.endpoints(self.edge);
        if self.dir > 0 {
            (u, v)
        } else {
            (v, u)
        }
    }
}

/// Edge path as a list of steps.
pub type EdgePath = Vec<Step>;

pub fn inverse_path(p: &[Step]) -> EdgePath {
    p.iter().rev().map(|s| s.inverse()).collect()
}

/// Checks that `p` is a walk starting at `start`; returns its end vertex.
pub fn walk_end(g: &VirtualGraph, start: usize, p: &[Step]) -> Result<usize> {
    let mut at = start;
    for (i, s) in p.iter().enumerate() {
        if s.edge >= g.num_edges() {
            return Err(Error::UnknownEdge(s.edge));
        }
        if s.dir != 1 && s.dir != -1 {
            return Err(Error::MalformedPath(format!("step {i} has direction {}", s.dir)));
        }
        let (a, b) = s.ends(g);
        if a != at {
            return Err(Error::MalformedPath(format!("step {i} starts at vertex {a}, the walk is at {at}")));
        }
        at = b;
    }
    Ok(at)
}

/// Free reduction: cancels adjacent inverse steps until none remain.
pub fn reduce(p: &[Step]) -> EdgePath {
    let mut out: EdgePath = Vec::with_capacity(p.len());
    for &s in p {
        if out.last().is_some_and(|&t| t == s.inverse()) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    out
}

/// Pulls a closed path at `basepoint` tight.
pub fn tighten(g: &VirtualGraph, basepoint: usize, p: &[Step]) -> Result<EdgePath> {
    let end = walk_end(g, basepoint, p)?;
    if end != basepoint {
        return Err(Error::MalformedPath(format!("path ends at {end}, not at the basepoint {basepoint}")));
    }
    Ok(reduce(p))
}

pub fn concat(parts: &[&[Step]]) -> EdgePath {
    reduce(&parts.concat())
}

/// Splits a reduced closed path as `u p u^-1` with `p` cyclically reduced.
pub fn cyclic_core(p: &[Step]) -> (EdgePath, EdgePath) {
    let mut i = 0;
    let n = p.len();
    while 2 * i + 2 <= n && p[i] == p[n - 1 - i].inverse() {
        i += 1;
    }
    (p[..i].to_vec(), p[i..n - i].to_vec())
}

/// Shortest `r` with `p = r^k`.
pub fn root(p: &[Step]) -> EdgePath {
    let n = p.len();
    for d in 1..=n {
        if n % d == 0 && (0..n).all(|i| p[i] == p[i % d]) {
            return p[..d].to_vec();
        }
    }
    p.to_vec()
}

pub fn power(p: &[Step], k: i64) -> EdgePath {
    let base = if k < 0 { inverse_path(p) } else { p.to_vec() };
    let mut out = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
    for _ in 0..k.unsigned_abs() {
        out.extend_from_slice(&base);
    }
    reduce(&out)
}

/// Edge name: `a`..`z`, then `e26`, `e27`, ...
pub fn edge_name(e: usize) -> String {
    if e < 26 {
        ((b'a' + e as u8) as char).to_string()
    } else {
        format!("e{e}")
    }
}

/// Renders a path like `a- b` for the inverse of `a` followed by `b`.
pub fn render(p: &[Step]) -> String {
    if p.is_empty() {
        return "1".into();
    }
    p.iter()
        .map(|s| if s.dir > 0 { edge_name(s.edge) } else { format!("{}-", edge_name(s.edge)) })
        .collect::<Vec<_>>()
        .join(" ")
}
