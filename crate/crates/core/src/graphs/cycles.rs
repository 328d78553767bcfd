use std::collections::VecDeque;

use num_bigint::BigInt;

use super::{UnionFind, WeightedGraph};
use crate::ratlin::IntMatrix;

/// Spanning tree grown by scanning edges in index order; `true` marks tree
/// edges.
pub fn spanning_tree(g: &WeightedGraph) -> Vec<bool> {
    let mut uf = UnionFind::new(g.num_vertices());
    g.edges().iter().map(|&(u, v)| uf.union(u, v)).collect()
}

/// Edges outside the spanning tree, in index order. They index the rows of
/// [`cycle_basis`].
pub fn non_tree_edges(g: &WeightedGraph) -> Vec<usize> {
    spanning_tree(g).iter().enumerate().filter(|(_, &t)| !t).map(|(e, _)| e).collect()
}

// Signed tree path from `from` to `to`, as (edge, +1/-1) steps.
pub(crate) fn tree_path(g: &WeightedGraph, tree: &[bool], from: usize, to: usize) -> Vec<(usize, i64)> {
    let n = g.num_vertices();
    let mut prev: Vec<Option<(usize, usize, i64)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if !tree[e] {
                continue;
            }
            let step = if u == x { Some((v, 1)) } else if v == x { Some((u, -1)) } else { None };
            if let Some((y, dir)) = step {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, e, dir));
                    queue.push_back(y);
                }
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, e, dir) = prev[cur].expect("tree spans the graph");
        path.push((e, dir));
        cur = p;
    }
    path.reverse();
    path
}

/// Fundamental cycles of the index-order spanning tree, one row per
/// non-tree edge. Each cycle runs along its non-tree edge and returns
/// through the tree.
pub fn cycle_basis(g: &WeightedGraph) -> IntMatrix {
    let tree = spanning_tree(g);
    let rows: Vec<Vec<BigInt>> = non_tree_edges(g)
        .into_iter()
        .map(|e| {
            let mut row = vec![0i64; g.num_edges()];
            row[e] = 1;
            let (u, v) = g.endpoints(e);
            for (f, dir) in tree_path(g, &tree, v, u) {
                row[f] += dir;
            }
            row.into_iter().map(BigInt::from).collect()
        })
        .collect();
    IntMatrix::from_rows(rows, g.num_edges())
}

/// Coordinates of a cycle (given as an edge vector) in the fundamental
/// basis: its entries on the non-tree edges.
pub fn cycle_coordinates(g: &WeightedGraph, cycle: &[BigInt]) -> Vec<BigInt> {
    non_tree_edges(g).into_iter().map(|e| cycle[e].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::smith_invariants;

    #[test]
    fn basis_examples() {
        assert_eq!(cycle_basis(&WeightedGraph::theta()), IntMatrix::from_i64(&[vec![-1, 1, 0], vec![-1, 0, 1]]));
        assert_eq!(cycle_basis(&WeightedGraph::rose(2)), IntMatrix::identity(2));
        let tree = WeightedGraph::new(vec![1, 1], vec![(0, 1)]).unwrap();
        assert_eq!(cycle_basis(&tree).rows(), 0);
    }

    #[test]
    fn basis_is_unimodular_on_cycle_lattice() {
        let k4 = WeightedGraph::new(vec![0; 4], vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let b = cycle_basis(&k4);
        assert_eq!(b.rows(), 3);
        assert!(smith_invariants(&b).iter().all(|d| *d == BigInt::from(1)));
        let coords = cycle_coordinates(&k4, b.row(1));
        assert_eq!(coords, vec![BigInt::from(0), BigInt::from(1), BigInt::from(0)]);
    }
}
