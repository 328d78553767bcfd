//! Weighted multigraphs: genus, stability, contraction and specialization.
//!
//! Vertices are `0..n` and carry a nonnegative weight. Edges are indexed
//! `0..m` and stored with a fixed orientation `(tail, head)`; loops and
//! parallel edges are allowed. Every graph is connected.

mod cycles;
mod io;
mod iso;
mod virtual_graph;

use std::collections::BTreeMap;

use crate::{Error, Result};

pub use cycles::{cycle_basis, cycle_coordinates, non_tree_edges, spanning_tree};
pub(crate) use cycles::tree_path;
pub use io::to_dot;
pub use iso::{automorphisms, canonical_form, isomorphisms, Canonical, CanonicalKey, Isomorphism, MAX_CANONICAL_VERTICES};
pub use virtual_graph::{virtual_graph, VirtualGraph};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    weights: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

/// Disjoint-set forest over `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Result of contracting a set of edges, with the induced maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub graph: WeightedGraph,
    /// Old vertex to new vertex.
    pub vertex_map: Vec<usize>,
    /// Old edge to new edge, `None` for contracted edges.
    pub edge_map: Vec<Option<usize>>,
}

/// One isomorphism class of contractions of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    /// Lowest (by bitmask order) edge subset realizing the class.
    pub edges: Vec<usize>,
    pub graph: WeightedGraph,
    pub key: CanonicalKey,
}

impl WeightedGraph {
    /// Builds a graph, checking endpoints and connectivity.
    pub fn new(weights: Vec<u32>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let g = WeightedGraph { weights, edges };
        if g.weights.is_empty() {
            return Err(Error::Disconnected);
        }
        for &(u, v) in &g.edges {
            for x in [u, v] {
                if x >= g.weights.len() {
                    return Err(Error::UnknownVertex(x));
                }
            }
        }
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Single vertex of weight `w` without edges.
    pub fn point(w: u32) -> Self {
        WeightedGraph { weights: vec![w], edges: Vec::new() }
    }

    pub fn theta() -> Self {
        WeightedGraph { weights: vec![0, 0], edges: vec![(0, 1); 3] }
    }

    pub fn dumbbell() -> Self {
        WeightedGraph { weights: vec![0, 0], edges: vec![(0, 0), (1, 1), (0, 1)] }
    }

    /// One vertex with `n` loops (the rose).
    pub fn rose(n: usize) -> Self {
        WeightedGraph { weights: vec![0], edges: vec![(0, 0); n] }
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.edges[e].0 == self.edges[e].1
    }

    pub fn total_weight(&self) -> usize {
        self.weights.iter().map(|&w| w as usize).sum()
    }

    /// `|E| - |V| + 1`.
    pub fn first_betti(&self) -> usize {
        self.edges.len() + 1 - self.weights.len()
    }

    /// `|E| - |V| + 1 + sum of weights`.
    pub fn genus(&self) -> usize {
        self.first_betti() + self.total_weight()
    }

    /// Number of half-edges at `v`; loops count twice.
    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| usize::from(a == v) + usize::from(b == v)).sum()
    }

    pub fn loop_count(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v && b == v).count()
    }

    pub fn is_pure(&self) -> bool {
        self.weights.iter().all(|&w| w == 0)
    }

    fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.weights.len());
        let mut parts = self.weights.len();
        for &(u, v) in &self.edges {
            if uf.union(u, v) {
                parts -= 1;
            }
        }
        parts == 1
    }

    /// First weight-zero vertex of valence below three, if any.
    pub fn stability_violation(&self) -> Option<(usize, usize)> {
        (0..self.num_vertices())
            .filter(|&v| self.weights[v] == 0)
            .map(|v| (v, self.valence(v)))
            .find(|&(_, val)| val < 3)
    }

    pub fn is_stable(&self) -> bool {
        self.stability_violation().is_none()
    }

    pub fn check_stable(&self) -> Result<()> {
        match self.stability_violation() {
            Some((vertex, valence)) => Err(Error::Unstable { vertex, valence }),
            None => Ok(()),
        }
    }

    pub fn check_edge(&self, e: usize) -> Result<()> {
        if e < self.edges.len() {
            Ok(())
        } else {
            Err(Error::UnknownEdge(e))
        }
    }

    /// True when the edge set contains a cycle (a loop or a closed walk).
    pub fn contains_cycle(&self, subset: &[usize]) -> bool {
        let mut uf = UnionFind::new(self.num_vertices());
        subset.iter().any(|&e| {
            let (u, v) = self.edges[e];
            !uf.union(u, v)
        })
    }

    /// Contracts the edges of `s`. Each connected component of `(V, s)`
    /// becomes one vertex whose weight is the sum of the weights plus the
    /// cycle rank of the component; new vertices are numbered by their
    /// smallest old vertex, surviving edges keep their relative order.
    pub fn contract_with_maps(&self, s: &[usize]) -> Result<Contraction> {
        let n = self.num_vertices();
        let mut in_s = vec![false; self.num_edges()];
        for &e in s {
            self.check_edge(e)?;
            in_s[e] = true;
        }
        let mut uf = UnionFind::new(n);
        let mut extra = vec![0u32; n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if in_s[e] && !uf.union(u, v) {
                extra[u] += 1;
            }
        }
        let mut root_to_new = BTreeMap::new();
        let mut vertex_map = vec![0; n];
        for (v, slot) in vertex_map.iter_mut().enumerate() {
            let r = uf.find(v);
            let next = root_to_new.len();
            *slot = *root_to_new.entry(r).or_insert(next);
        }
        let mut weights = vec![0u32; root_to_new.len()];
        for v in 0..n {
            weights[vertex_map[v]] += self.weights[v] + extra[v];
        }
        let mut edges = Vec::new();
        let mut edge_map = vec![None; self.num_edges()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if !in_s[e] {
                edge_map[e] = Some(edges.len());
                edges.push((vertex_map[u], vertex_map[v]));
            }
        }
        Ok(Contraction { graph: WeightedGraph { weights, edges }, vertex_map, edge_map })
    }

    pub fn contract(&self, s: &[usize]) -> Result<WeightedGraph> {
        Ok(self.contract_with_maps(s)?.graph)
    }

    /// All contractions grouped by isomorphism class, ordered by the
    /// first subset (in bitmask order) that realizes each class.
    pub fn specializations(&self) -> Result<Vec<Specialization>> {
        let m = self.num_edges();
        if m > 20 {
            return Err(Error::SizeGuard { what: "edge count", value: m, limit: 20 });
        }
        let mut seen = BTreeMap::new();
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << m) {
            let subset = mask_to_subset(mask, m);
            let graph = self.contract(&subset)?;
            let key = canonical_form(&graph)?.key;
            if seen.insert(key.clone(), out.len()).is_none() {
                out.push(Specialization { edges: subset, graph, key });
            }
        }
        Ok(out)
    }

    /// Same graph with vertices relabelled by `perm` (old to new) and edges
    /// listed in `edge_order` (new index to old index).
    pub fn relabel(&self, perm: &[usize], edge_order: &[usize]) -> WeightedGraph {
        let mut weights = vec![0; self.num_vertices()];
        for (v, &p) in perm.iter().enumerate() {
            weights[p] = self.weights[v];
        }
        let edges = edge_order
            .iter()
            .map(|&e| {
                let (u, v) = self.edges[e];
                (perm[u], perm[v])
            })
            .collect();
        WeightedGraph { weights, edges }
    }
}

pub fn mask_to_subset(mask: u32, m: usize) -> Vec<usize> {
    (0..m).filter(|&i| mask & (1 << i) != 0).collect()
}
