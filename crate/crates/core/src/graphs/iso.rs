//! Canonical forms and isomorphisms by exhaustive search over vertex
//! bijections that respect cheap vertex invariants.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::WeightedGraph;
use crate::{Error, Result};

pub const MAX_CANONICAL_VERTICES: usize = 12;

/// Canonical encoding: weights in canonical vertex order and the sorted
/// list of edges as `(min, max)` endpoint pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalKey {
    pub weights: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
}

impl CanonicalKey {
    pub fn to_graph(&self) -> WeightedGraph {
        WeightedGraph { weights: self.weights.clone(), edges: self.edges.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub key: CanonicalKey,
    /// Old vertex to canonical vertex.
    pub vertex_perm: Vec<usize>,
    /// Canonical edge index to old edge index.
    pub edge_order: Vec<usize>,
}

impl Canonical {
    pub fn graph(&self) -> WeightedGraph {
        self.key.to_graph()
    }
}

/// Isomorphism `a -> b`: vertex map, edge map and, per edge of `a`, whether
/// the stored orientation is reversed. Loops are never marked reversed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Isomorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub edge_flip: Vec<bool>,
}

fn guard(g: &WeightedGraph) -> Result<()> {
    let n = g.num_vertices();
    if n > MAX_CANONICAL_VERTICES {
        return Err(Error::SizeGuard { what: "vertex count", value: n, limit: MAX_CANONICAL_VERTICES });
    }
    Ok(())
}

type Invariant = (u32, usize, usize, Vec<(u32, usize)>);

fn invariants(g: &WeightedGraph) -> Vec<Invariant> {
    (0..g.num_vertices())
        .map(|v| {
            let mut nbrs: Vec<(u32, usize)> = g
                .edges()
                .iter()
                .filter(|&&(a, b)| a != b && (a == v || b == v))
                .map(|&(a, b)| {
                    let w = if a == v { b } else { a };
                    (g.weight(w), g.valence(w))
                })
                .collect();
            nbrs.sort();
            (g.weight(v), g.valence(v), g.loop_count(v), nbrs)
        })
        .collect()
}

fn for_each_permutation(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        for_each_permutation(items, k + 1, f);
        items.swap(k, i);
    }
}

fn normalized(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Canonical form: the lexicographically smallest edge encoding over all
/// vertex orders in which vertices appear sorted by their invariants.
pub fn canonical_form(g: &WeightedGraph) -> Result<Canonical> {
    guard(g)?;
    let inv = invariants(g);
    let mut classes: BTreeMap<&Invariant, Vec<usize>> = BTreeMap::new();
    for (v, i) in inv.iter().enumerate() {
        classes.entry(i).or_default().push(v);
    }
    let blocks: Vec<Vec<usize>> = classes.into_values().collect();
    let weights: Vec<u32> = blocks.iter().flat_map(|b| b.iter().map(|&v| g.weight(v))).collect();

    let mut best: Option<(Vec<(usize, usize)>, Vec<usize>)> = None;
    let mut perm = vec![0usize; g.num_vertices()];
    search_blocks(&blocks, 0, 0, &mut perm, &mut |perm| {
        let mut enc: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| normalized(perm[u], perm[v])).collect();
        enc.sort_unstable();
        if best.as_ref().is_none_or(|(b, _)| enc < *b) {
            best = Some((enc, perm.to_vec()));
        }
    });
    let (edges, vertex_perm) = best.expect("at least one vertex order");
    let mut edge_order: Vec<usize> = (0..g.num_edges()).collect();
    edge_order.sort_by_key(|&e| {
        let (u, v) = g.endpoints(e);
        (normalized(vertex_perm[u], vertex_perm[v]), e)
    });
    Ok(Canonical { key: CanonicalKey { weights, edges }, vertex_perm, edge_order })
}

fn search_blocks(blocks: &[Vec<usize>], bi: usize, offset: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if bi == blocks.len() {
        f(perm);
        return;
    }
    let block = &blocks[bi];
    let mut positions: Vec<usize> = (offset..offset + block.len()).collect();
    for_each_permutation(&mut positions, 0, &mut |pos| {
        let mut p = perm.clone();
        for (&v, &t) in block.iter().zip(pos) {
            p[v] = t;
        }
        search_blocks(blocks, bi + 1, offset + block.len(), &mut p, f);
    });
}

fn multiplicities(g: &WeightedGraph) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut m: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        m.entry(normalized(u, v)).or_default().push(e);
    }
    m
}

/// All isomorphisms `a -> b` (vertex and edge bijections preserving weights
/// and incidence), in a deterministic order.
pub fn isomorphisms(a: &WeightedGraph, b: &WeightedGraph) -> Result<Vec<Isomorphism>> {
    guard(a)?;
    guard(b)?;
    if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() {
        return Ok(Vec::new());
    }
    let (ia, ib) = (invariants(a), invariants(b));
    let (ma, mb) = (multiplicities(a), multiplicities(b));
    let mult = |m: &BTreeMap<(usize, usize), Vec<usize>>, u: usize, v: usize| m.get(&normalized(u, v)).map_or(0, Vec::len);

    let n = a.num_vertices();
    let mut vertex_maps = Vec::new();
    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    fn rec(
        v: usize,
        n: usize,
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(usize, usize, &[Option<usize>]) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if v == n {
            out.push(assign.iter().map(|x| x.unwrap()).collect());
            return;
        }
        for t in 0..n {
            if used[t] || !ok(v, t, assign) {
                continue;
            }
            assign[v] = Some(t);
            used[t] = true;
            rec(v + 1, n, assign, used, ok, out);
            assign[v] = None;
            used[t] = false;
        }
    }
    let ok = |v: usize, t: usize, assign: &[Option<usize>]| {
        if ia[v] != ib[t] || mult(&ma, v, v) != mult(&mb, t, t) {
            return false;
        }
        (0..v).all(|u| mult(&ma, u, v) == mult(&mb, assign[u].unwrap(), t))
    };
    rec(0, n, &mut assign, &mut used, &ok, &mut vertex_maps);

    let mut out = Vec::new();
    for vm in vertex_maps {
        // Each group of parallel edges maps onto the group between the image
        // endpoints in every possible order.
        let groups: Vec<(Vec<usize>, Vec<usize>)> = ma
            .iter()
            .map(|(&(u, v), es)| (es.clone(), mb[&normalized(vm[u], vm[v])].clone()))
            .collect();
        let mut edge_map = vec![0usize; a.num_edges()];
        expand_groups(&groups, 0, &mut edge_map, &mut |em| {
            let edge_flip = (0..a.num_edges())
                .map(|e| {
                    let (u, v) = a.endpoints(e);
                    u != v && b.endpoints(em[e]) != (vm[u], vm[v])
                })
                .collect();
            out.push(Isomorphism { vertex_map: vm.clone(), edge_map: em.to_vec(), edge_flip });
        });
    }
    Ok(out)
}

fn expand_groups(groups: &[(Vec<usize>, Vec<usize>)], gi: usize, edge_map: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if gi == groups.len() {
        f(edge_map);
        return;
    }
    let (src, dst) = &groups[gi];
    let mut order: Vec<usize> = (0..dst.len()).collect();
    for_each_permutation(&mut order, 0, &mut |p| {
        let mut em = edge_map.clone();
        for (i, &s) in src.iter().enumerate() {
            em[s] = dst[p[i]];
        }
        expand_groups(groups, gi + 1, &mut em, f);
    });
}

/// Weight-preserving automorphisms acting on vertex and edge indices.
pub fn automorphisms(g: &WeightedGraph) -> Result<Vec<Isomorphism>> {
    let mut auts = isomorphisms(g, g)?;
    auts.sort();
    Ok(auts)
}
