//! Stable weighted graphs of genus `g` up to isomorphism, and the moduli
//! stacky fan glued from their length orthants.
//!
//! The catalogue is generated by undoing contractions: every stable graph
//! with an edge contracts to a stable graph with one edge less, so starting
//! from the single vertex of weight `g` and repeatedly turning a unit of
//! weight into a loop or splitting a vertex along a new edge reaches every
//! class. Classes are deduplicated by canonical form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graphs::{automorphisms, canonical_form, mask_to_subset, CanonicalKey, WeightedGraph};
use crate::ratlin::{IntMatrix, Rat};
use crate::stackyfan::{Cell, IdealCone, LatticeMap, StackyFan};
use crate::{Error, Result};

pub const MAX_GENUS: usize = 4;

fn guard(g: usize) -> Result<()> {
    if g == 0 {
        return Err(Error::Unsupported("genus must be at least 1".into()));
    }
    if g > MAX_GENUS {
        return Err(Error::SizeGuard { what: "genus", value: g, limit: MAX_GENUS });
    }
    Ok(())
}

// Inverse contractions of one edge that stay stable.
fn uncontractions(g: &WeightedGraph) -> Vec<WeightedGraph> {
    let mut out = Vec::new();
    let n = g.num_vertices();
    for v in 0..n {
        let w = g.weight(v);
        if w >= 1 {
            let mut weights = g.weights().to_vec();
            weights[v] -= 1;
            let mut edges = g.edges().to_vec();
            edges.push((v, v));
            let h = WeightedGraph::new(weights, edges).expect("adding a loop keeps the graph connected");
            if h.is_stable() {
                out.push(h);
            }
        }
        // Half-edges at v, as (edge, end).
        let halves: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .enumerate()
            .flat_map(|(e, &(a, b))| {
                let mut h = Vec::new();
                if a == v {
                    h.push((e, 0));
                }
                if b == v {
                    h.push((e, 1));
                }
                h
            })
            .collect();
        for mask in 0u64..(1u64 << halves.len()) {
            for w_new in 0..=w {
                let mut weights = g.weights().to_vec();
                weights[v] = w - w_new;
                weights.push(w_new);
                let mut edges = g.edges().to_vec();
                for (i, &(e, end)) in halves.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        if end == 0 {
                            edges[e].0 = n;
                        } else {
                            edges[e].1 = n;
                        }
                    }
                }
                edges.push((v, n));
                let h = WeightedGraph::new(weights, edges).expect("splitting along a new edge keeps the graph connected");
                if h.is_stable() {
                    out.push(h);
                }
            }
        }
    }
    out
}

/// All stable weighted graphs of genus `g` up to isomorphism, as canonical
/// graphs sorted by edge count, vertex count and canonical encoding.
pub fn enumerate_stable(g: usize) -> Result<Vec<WeightedGraph>> {
    guard(g)?;
    let mut all: BTreeSet<(usize, usize, CanonicalKey)> = BTreeSet::new();
    let start = WeightedGraph::point(g as u32);
    let key = canonical_form(&start)?.key;
    all.insert((0, 1, key.clone()));
    let mut level = vec![key];
    while !level.is_empty() {
        let next: BTreeSet<CanonicalKey> = level
            .par_iter()
            .flat_map_iter(|k| uncontractions(&k.to_graph()))
            .map(|h| canonical_form(&h).map(|c| c.key))
            .collect::<Result<BTreeSet<_>>>()?;
        for k in &next {
            all.insert((k.edges.len(), k.weights.len(), k.clone()));
        }
        level = next.into_iter().collect();
    }
    Ok(all.into_iter().map(|(_, _, k)| k.to_graph()).collect())
}

/// The classes with all weights zero.
pub fn enumerate_stable_pure(g: usize) -> Result<Vec<WeightedGraph>> {
    Ok(enumerate_stable(g)?.into_iter().filter(WeightedGraph::is_pure).collect())
}

/// Catalogue of genus `g` classes with lookup by canonical key.
#[derive(Clone, Debug)]
pub struct Catalogue {
    pub genus: usize,
    pub graphs: Vec<WeightedGraph>,
    index: BTreeMap<CanonicalKey, usize>,
}

impl Catalogue {
    pub fn new(g: usize) -> Result<Self> {
        Self::from_graphs(g, enumerate_stable(g)?)
    }

    pub fn pure(g: usize) -> Result<Self> {
        Self::from_graphs(g, enumerate_stable_pure(g)?)
    }

    fn from_graphs(genus: usize, graphs: Vec<WeightedGraph>) -> Result<Self> {
        let index = graphs
            .iter()
            .enumerate()
            .map(|(i, g)| Ok((canonical_form(g)?.key, i)))
            .collect::<Result<_>>()?;
        Ok(Catalogue { genus, graphs, index })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn index_of(&self, key: &CanonicalKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Catalogue position of a graph isomorphic to `g`.
    pub fn find(&self, g: &WeightedGraph) -> Result<usize> {
        let key = canonical_form(g)?.key;
        self.index_of(&key).ok_or_else(|| Error::NoMatchingCell(format!("{key:?}")))
    }

    /// Cell and orbit-normalized coordinates of a tropical curve.
    pub fn locate(&self, g: &WeightedGraph, lengths: &[Rat]) -> Result<Located> {
        g.check_stable()?;
        check_lengths(g, lengths)?;
        let canon = canonical_form(g)?;
        let cell = self.index_of(&canon.key).ok_or_else(|| Error::NoMatchingCell(format!("{:?}", canon.key)))?;
        let coords: Vec<Rat> = canon.edge_order.iter().map(|&e| lengths[e].clone()).collect();
        let graph = &self.graphs[cell];
        let best = automorphisms(graph)?
            .iter()
            .map(|a| {
                let mut c = coords.clone();
                for (j, &img) in a.edge_map.iter().enumerate() {
                    c[img] = coords[j].clone();
                }
                c
            })
            .min()
            .unwrap_or(coords);
        Ok(Located { cell, coords: best })
    }
}

pub(crate) fn check_lengths(g: &WeightedGraph, lengths: &[Rat]) -> Result<()> {
    if lengths.len() != g.num_edges() {
        return Err(Error::DimensionMismatch { expected: g.num_edges(), found: lengths.len() });
    }
    if let Some(e) = lengths.iter().position(|l| !l.is_positive()) {
        return Err(Error::NonPositiveLength(e));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Located {
    pub cell: usize,
    #[serde(with = "crate::ratlin::rat_vec")]
    pub coords: Vec<Rat>,
}

/// Locates a tropical curve in the genus catalogue.
pub fn locate(g: &WeightedGraph, lengths: &[Rat]) -> Result<Located> {
    g.check_stable()?;
    Catalogue::new(g.genus())?.locate(g, lengths)
}

/// Short label: weights and edges of the canonical graph.
pub fn cell_label(g: &WeightedGraph) -> String {
    let mut s = String::from("w=");
    let ws: Vec<String> = g.weights().iter().map(u32::to_string).collect();
    let _ = write!(s, "[{}] e=[", ws.join(","));
    let es: Vec<String> = g.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    let _ = write!(s, "{}]", es.join(","));
    s
}

fn permutation_matrix(n: usize, image: impl Fn(usize) -> usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for j in 0..n {
        m.set(image(j), j, 1.into());
    }
    m
}

/// Face maps of one cell: an inclusion for every contraction whose result
/// is kept by `keep`, and a coordinate permutation for every automorphism.
fn cell_maps(cat: &Catalogue, a: usize, keep: &dyn Fn(&WeightedGraph, &[usize]) -> bool) -> Result<Vec<LatticeMap>> {
    let g = &cat.graphs[a];
    let m = g.num_edges();
    let mut maps = BTreeSet::new();
    for alpha in automorphisms(g)? {
        maps.insert(LatticeMap { source: a, target: a, matrix: permutation_matrix(m, |j| alpha.edge_map[j]) });
    }
    for mask in 1u32..(1u32 << m) {
        let s = mask_to_subset(mask, m);
        if !keep(g, &s) {
            continue;
        }
        let c = g.contract_with_maps(&s)?;
        let canon = canonical_form(&c.graph)?;
        let Some(b) = cat.index_of(&canon.key) else { continue };
        // Canonical edge j of b is edge edge_order[j] of the contraction,
        // which is the image of exactly one surviving edge of g.
        let mut old_of_new = vec![0; c.graph.num_edges()];
        for (old, new) in c.edge_map.iter().enumerate() {
            if let Some(n) = new {
                old_of_new[*n] = old;
            }
        }
        let mut mat = IntMatrix::zeros(m, canon.edge_order.len());
        for (j, &e) in canon.edge_order.iter().enumerate() {
            mat.set(old_of_new[e], j, 1.into());
        }
        maps.insert(LatticeMap { source: b, target: a, matrix: mat });
    }
    Ok(maps.into_iter().collect())
}

fn assemble(cat: &Catalogue, removed_for: &dyn Fn(&WeightedGraph) -> Vec<Vec<usize>>, keep: &(dyn Fn(&WeightedGraph, &[usize]) -> bool + Sync)) -> Result<StackyFan> {
    let cells = cat
        .graphs
        .iter()
        .map(|g| Ok(Cell { label: cell_label(g), cone: IdealCone::orthant(g.num_edges(), &removed_for(g))? }))
        .collect::<Result<Vec<_>>>()?;
    let per_cell: Vec<Vec<LatticeMap>> = (0..cat.len())
        .into_par_iter()
        .map(|a| cell_maps(cat, a, keep))
        .collect::<Result<_>>()?;
    Ok(StackyFan::new(cells, per_cell.into_iter().flatten().collect()))
}

/// The moduli stacky fan: one closed orthant per class, glued along every
/// contraction and every automorphism.
pub fn build_moduli_fan(g: usize) -> Result<StackyFan> {
    let cat = Catalogue::new(g)?;
    assemble(&cat, &|_| Vec::new(), &|_, _| true)
}

/// Faces of the pure orthant that are removed: those whose vanishing edge
/// set contains a cycle. Given by ray sets (surviving edges).
pub fn pure_removed_faces(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let m = g.num_edges();
    (0u32..(1u32 << m))
        .map(|mask| mask_to_subset(mask, m))
        .filter(|zero| g.contains_cycle(zero))
        .map(|zero| (0..m).filter(|e| !zero.contains(e)).collect())
        .collect()
}

/// The pure ideal subfan: classes with all weights zero, orthants with the
/// faces along cycles removed.
pub fn pure_subfan(g: usize) -> Result<StackyFan> {
    let cat = Catalogue::pure(g)?;
    assemble(&cat, &pure_removed_faces, &|graph, s| !graph.contains_cycle(s))
}
