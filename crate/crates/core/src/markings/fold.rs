use std::collections::BTreeSet;

use super::path::{walk_end, Step};
use crate::graphs::{UnionFind, VirtualGraph};
use crate::{Error, Result};

// Arc of the folding graph: (tail node, head node, edge of the target),
// oriented like the target edge.
type Arc = (usize, usize, usize);

/// Decides whether the petals generate `pi_1(g, basepoint)` by Stallings
/// folding the wedge of petal loops over `g`.
pub fn validate_marking(g: &VirtualGraph, basepoint: usize, petals: &[Vec<Step>]) -> Result<bool> {
    if basepoint >= g.num_vertices() {
        return Err(Error::UnknownVertex(basepoint));
    }
    if petals.len() != g.genus() {
        return Err(Error::GenusMismatch { petals: petals.len(), genus: g.genus() });
    }
    for (i, p) in petals.iter().enumerate() {
        if walk_end(g, basepoint, p)? != basepoint {
            return Err(Error::BasepointMismatch { petal: i, basepoint });
        }
    }

    // Wedge of circles: node 0 is the basepoint.
    let mut image = vec![basepoint];
    let mut arcs: Vec<Arc> = Vec::new();
    for p in petals {
        let mut at = 0;
        for (k, s) in p.iter().enumerate() {
            let next = if k + 1 == p.len() {
                0
            } else {
                image.push(s.ends(g).1);
                image.len() - 1
            };
            arcs.push(if s.dir > 0 { (at, next, s.edge) } else { (next, at, s.edge) });
            at = next;
        }
    }

    let mut uf = UnionFind::new(image.len());
    loop {
        let current: BTreeSet<Arc> = arcs.iter().map(|&(a, b, e)| (uf.find(a), uf.find(b), e)).collect();
        arcs = current.into_iter().collect();
        let mut merged = false;
        'scan: for i in 0..arcs.len() {
            for j in i + 1..arcs.len() {
                let (a1, b1, e1) = arcs[i];
                let (a2, b2, e2) = arcs[j];
                if e1 != e2 {
                    continue;
                }
                if (a1 == a2 && b1 != b2) || (b1 == b2 && a1 != a2) {
                    uf.union(b1, b2);
                    uf.union(a1, a2);
                    merged = true;
                    break 'scan;
                }
            }
        }
        if !merged {
            break;
        }
    }

    let root = uf.find(0);
    let nodes: BTreeSet<usize> = (0..image.len()).map(|v| uf.find(v)).collect();
    let (nodes, arcs) = trim(nodes, arcs, root);

    let target_arcs: Vec<Arc> = (0..g.num_edges())
        .map(|e| {
            let (u, v) = g.endpoints(e);
            (u, v, e)
        })
        .collect();
    let (core_vertices, core_arcs) = trim((0..g.num_vertices()).collect(), target_arcs, basepoint);

    // The immersion must be a bijection onto the core of the target.
    let mut hit: BTreeSet<usize> = BTreeSet::new();
    for &v in &nodes {
        if !hit.insert(image[v]) {
            return Ok(false);
        }
    }
    if hit != core_vertices {
        return Ok(false);
    }
    let mut edges: Vec<usize> = arcs.iter().map(|a| a.2).collect();
    edges.sort_unstable();
    let mut expected: Vec<usize> = core_arcs.iter().map(|a| a.2).collect();
    expected.sort_unstable();
    Ok(edges == expected)
}

// Removes hanging trees: vertices of degree one other than `keep`.
fn trim(mut nodes: BTreeSet<usize>, mut arcs: Vec<Arc>, keep: usize) -> (BTreeSet<usize>, Vec<Arc>) {
    loop {
        let leaf = nodes.iter().copied().find(|&v| {
            v != keep && arcs.iter().map(|&(a, b, _)| usize::from(a == v) + usize::from(b == v)).sum::<usize>() <= 1
        });
        match leaf {
            Some(v) => {
                nodes.remove(&v);
                arcs.retain(|&(a, b, _)| a != v && b != v);
            }
            None => return (nodes, arcs),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{virtual_graph, WeightedGraph};

    fn st(e: usize, d: i8) -> Step {
        Step::new(e, d)
    }

    #[test]
    fn figure_eight_examples() {
        let g = virtual_graph(&WeightedGraph::rose(2));
        assert!(validate_marking(&g, 0, &[vec![st(0, 1)], vec![st(1, 1)]]).unwrap());
        assert!(validate_marking(&g, 0, &[vec![st(0, 1)], vec![st(0, 1), st(1, 1), st(0, -1)]]).unwrap());
        assert!(!validate_marking(&g, 0, &[vec![st(0, 1), st(0, 1)], vec![st(1, 1)]]).unwrap());
        assert!(!validate_marking(&g, 0, &[vec![st(0, 1)], vec![]]).unwrap());
        // Unimodular abelianization but a proper subgroup: [x, y] x and y.
        let comm = vec![st(0, 1), st(1, 1), st(0, -1), st(1, -1), st(0, 1)];
        assert!(!validate_marking(&g, 0, &[comm, vec![st(1, 1)]]).unwrap());
        assert!(validate_marking(&g, 0, &[vec![st(0, 1), st(1, 1)], vec![st(1, 1)]]).unwrap());
        let proper = vec![st(0, 1), st(1, 1), st(0, 1), st(1, -1)];
        assert!(!validate_marking(&g, 0, &[proper, vec![st(1, 1), st(0, 1), st(1, -1)]]).unwrap());
    }

    #[test]
    fn errors() {
        let g = virtual_graph(&WeightedGraph::rose(2));
        assert_eq!(validate_marking(&g, 0, &[vec![st(0, 1)]]), Err(Error::GenusMismatch { petals: 1, genus: 2 }));
        let theta = virtual_graph(&WeightedGraph::theta());
        assert_eq!(
            validate_marking(&theta, 0, &[vec![st(0, 1)], vec![st(1, 1), st(0, -1)]]),
            Err(Error::BasepointMismatch { petal: 0, basepoint: 0 })
        );
    }

    #[test]
    fn intro_marking_generates() {
        let g = virtual_graph(&WeightedGraph::new(vec![0, 0, 0], vec![(0, 1), (0, 1), (0, 1), (1, 2), (2, 2)]).unwrap());
        let petals = vec![vec![st(0, -1), st(1, 1)], vec![st(2, -1), st(1, 1)], vec![st(3, 1), st(4, 1), st(3, -1)]];
        assert!(validate_marking(&g, 1, &petals).unwrap());
        let weak = vec![vec![st(0, -1), st(1, 1)], vec![st(0, -1), st(1, 1)], vec![st(3, 1), st(4, 1), st(3, -1)]];
        assert!(!validate_marking(&g, 1, &weak).unwrap());
    }
}
