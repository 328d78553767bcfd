//! Markings of weighted graphs by petal edge-paths in the virtual graph.

mod equiv;
mod fold;
mod nielsen;
mod path;
pub mod teich;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::graphs::{cycle_coordinates, spanning_tree, tree_path, virtual_graph, VirtualGraph, WeightedGraph};
use crate::ratlin::IntMatrix;
use crate::{Error, Result};

pub use equiv::{cell_star, markings_equivalent, EquivalenceMode, MarkedFace};
pub use fold::validate_marking;
pub use nielsen::{apply_auto, reduce_word, NielsenAuto, NielsenMove, Word};
pub use path::{concat, cyclic_core, edge_name, inverse_path, reduce, render, root, tighten, walk_end, EdgePath, Step};

/// A marking `R_g -> Γ^w`: `g` tight petal loops at a common basepoint
/// that generate the fundamental group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Marking {
    graph: VirtualGraph,
    basepoint: usize,
    petals: Vec<EdgePath>,
}

/// Interchange form of a marking; the graph travels separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkingData {
    pub basepoint: usize,
    pub petals: Vec<Vec<Step>>,
}

impl Marking {
    /// Tightens the petals and validates them by folding.
    pub fn new(graph: VirtualGraph, basepoint: usize, petals: Vec<EdgePath>) -> Result<Self> {
        if !validate_marking(&graph, basepoint, &petals)? {
            return Err(Error::InvalidMarking);
        }
        let petals = petals.iter().map(|p| reduce(p)).collect();
        Ok(Marking { graph, basepoint, petals })
    }

    pub fn on(graph: &WeightedGraph, basepoint: usize, petals: Vec<EdgePath>) -> Result<Self> {
        Marking::new(virtual_graph(graph), basepoint, petals)
    }

    pub fn from_data(graph: &WeightedGraph, data: &MarkingData) -> Result<Self> {
        Marking::on(graph, data.basepoint, data.petals.clone())
    }

    pub fn to_data(&self) -> MarkingData {
        MarkingData { basepoint: self.basepoint, petals: self.petals.clone() }
    }

    /// The marking whose petals are the fundamental cycles of the
    /// index-order spanning tree followed by the virtual loops, all based at
    /// vertex 0. Its H1 matrix is the identity.
    pub fn standard(graph: &WeightedGraph) -> Self {
        let vg = virtual_graph(graph);
        let tree = spanning_tree(graph);
        let to = |v: usize| -> EdgePath { steps(tree_path(graph, &tree, 0, v)) };
        let mut petals = Vec::new();
        for (e, &in_tree) in tree.iter().enumerate() {
            if !in_tree {
                let (u, v) = graph.endpoints(e);
                petals.push(concat(&[&to(u), &[Step::new(e, 1)], &inverse_path(&to(v))]));
            }
        }
        for (i, &v) in vg.virtual_owners().iter().enumerate() {
            let e = graph.num_edges() + i;
            petals.push(concat(&[&to(v), &[Step::new(e, 1)], &inverse_path(&to(v))]));
        }
        Marking { graph: vg, basepoint: 0, petals }
    }

    pub fn graph(&self) -> &VirtualGraph {
        &self.graph
    }

    pub fn base(&self) -> &WeightedGraph {
        self.graph.base()
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn petals(&self) -> &[EdgePath] {
        &self.petals
    }

    pub fn genus(&self) -> usize {
        self.petals.len()
    }

    /// Signed edge counts of each petal over all edges of `Γ^w`.
    pub fn edge_counts(&self) -> Vec<Vec<i64>> {
        self.petals
            .iter()
            .map(|p| {
                let mut row = vec![0i64; self.graph.num_edges()];
                for s in p {
                    row[s.edge] += i64::from(s.dir);
                }
                row
            })
            .collect()
    }

    /// Petals abelianized into the base edges (`g x |E|`); virtual loops
    /// contribute nothing.
    pub fn edge_matrix(&self) -> IntMatrix {
        let m = self.graph.num_base_edges();
        let rows = self.edge_counts().into_iter().map(|r| r[..m].iter().map(|&x| BigInt::from(x)).collect()).collect();
        IntMatrix::from_rows(rows, m)
    }

    /// Row `i` is petal `i` in `H1(Γ^w)`, written in the fundamental cycle
    /// basis of the base graph followed by the virtual loops.
    pub fn h1_matrix(&self) -> IntMatrix {
        h1_rows(&self.graph, &self.petals)
    }

    // Trusted constructor for images of valid markings under isomorphisms.
    pub(crate) fn from_parts(graph: VirtualGraph, basepoint: usize, petals: Vec<EdgePath>) -> Self {
        Marking { graph, basepoint, petals }
    }

    /// Contracts the base edges in `s`. The index-order spanning forest of
    /// `s` is collapsed; the remaining edges of `s` become virtual loops at
    /// the vertex they collapse to.
    pub fn specialize(&self, s: &[usize]) -> Result<Marking> {
        let base = self.graph.base();
        for &e in s {
            if e >= self.graph.num_edges() {
                return Err(Error::UnknownEdge(e));
            }
            if self.graph.is_virtual(e) {
                return Err(Error::VirtualEdge(e));
            }
        }
        let mut s: Vec<usize> = s.to_vec();
        s.sort_unstable();
        s.dedup();
        let c = base.contract_with_maps(&s)?;
        let vg = virtual_graph(&c.graph);

        // Edges of s closing a cycle, in index order.
        let mut uf = crate::graphs::UnionFind::new(base.num_vertices());
        let mut forest = vec![false; base.num_edges()];
        let mut cyclic = Vec::new();
        for &e in &s {
            let (u, v) = base.endpoints(e);
            if uf.union(u, v) {
                forest[e] = true;
            } else {
                cyclic.push(e);
            }
        }

        // Virtual loops at each new vertex: old virtual loops by old id,
        // then the cyclic edges of s.
        let mut virtual_of = vec![None; self.graph.num_edges()];
        let m_new = c.graph.num_edges();
        let mut next = vec![0usize; c.graph.num_vertices()];
        let mut offset = vec![0usize; c.graph.num_vertices()];
        let mut acc = m_new;
        for (v, slot) in offset.iter_mut().enumerate() {
            *slot = acc;
            acc += c.graph.weight(v) as usize;
        }
        let m = base.num_edges();
        for (i, &owner) in self.graph.virtual_owners().iter().enumerate() {
            let v = c.vertex_map[owner];
            virtual_of[m + i] = Some(offset[v] + next[v]);
            next[v] += 1;
        }
        for &e in &cyclic {
            let v = c.vertex_map[base.endpoints(e).0];
            virtual_of[e] = Some(offset[v] + next[v]);
            next[v] += 1;
        }

        let petals = self
            .petals
            .iter()
            .map(|p| {
                let mapped: Vec<Step> = p
                    .iter()
                    .filter(|st| st.edge >= m || !forest[st.edge])
                    .map(|st| {
                        let edge = if st.edge < m { c.edge_map[st.edge].or(virtual_of[st.edge]) } else { virtual_of[st.edge] };
                        Step::new(edge.expect("every surviving edge has an image"), st.dir)
                    })
                    .collect();
                reduce(&mapped)
            })
            .collect();
        Marking::new(vg, c.vertex_map[self.basepoint], petals)
    }

    /// Human-readable petals, e.g. `a- b`.
    pub fn render(&self) -> Vec<String> {
        self.petals.iter().map(|p| render(p)).collect()
    }
}

/// Petals abelianized in the cycle basis of the base graph followed by the
/// virtual loops.
pub(crate) fn h1_rows(graph: &VirtualGraph, petals: &[EdgePath]) -> IntMatrix {
    let m = graph.num_base_edges();
    let rows = petals
        .iter()
        .map(|p| {
            let mut counts = vec![0i64; graph.num_edges()];
            for s in p {
                counts[s.edge] += i64::from(s.dir);
            }
            let base: Vec<BigInt> = counts[..m].iter().map(|&x| BigInt::from(x)).collect();
            let mut row = cycle_coordinates(graph.base(), &base);
            row.extend(counts[m..].iter().map(|&x| BigInt::from(x)));
            row
        })
        .collect();
    IntMatrix::from_rows(rows, graph.genus())
}

fn steps(p: Vec<(usize, i64)>) -> EdgePath {
    p.into_iter().map(|(e, d)| Step::new(e, d as i8)).collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn intro_graph() -> WeightedGraph {
        WeightedGraph::new(vec![0, 0, 0], vec![(0, 1), (0, 1), (0, 1), (1, 2), (2, 2)]).unwrap()
    }

    pub(crate) fn intro_marking() -> Marking {
        let st = Step::new;
        Marking::on(
            &intro_graph(),
            1,
            vec![vec![st(0, -1), st(1, 1)], vec![st(2, -1), st(1, 1)], vec![st(3, 1), st(4, 1), st(3, -1)]],
        )
        .unwrap()
    }

    #[test]
    fn intro_h1_matrix() {
        let m = intro_marking();
        assert_eq!(m.h1_matrix(), IntMatrix::from_i64(&[vec![1, 0, 0], vec![1, -1, 0], vec![0, 0, 1]]));
        assert!(m.h1_matrix().is_unimodular());
        assert_eq!(m.render(), vec!["a- b", "c- b", "d e d-"]);
    }

    #[test]
    fn standard_markings_have_identity_h1() {
        for g in [WeightedGraph::theta(), WeightedGraph::dumbbell(), intro_graph(), WeightedGraph::point(2)] {
            let m = Marking::standard(&g);
            assert!(validate_marking(m.graph(), 0, m.petals()).unwrap());
            assert_eq!(m.h1_matrix(), IntMatrix::identity(g.genus()));
        }
        let lw = WeightedGraph::new(vec![1], vec![(0, 0)]).unwrap();
        assert_eq!(Marking::standard(&lw).render(), vec!["a", "b"]);
    }

    #[test]
    fn specialize_intro() {
        let m = intro_marking();
        // Contracting a renames b..e to a..d.
        assert_eq!(m.specialize(&[0]).unwrap().render(), vec!["a", "b- a", "c d c-"]);
        assert_eq!(m.specialize(&[3]).unwrap().render(), vec!["a- b", "c- b", "d"]);
        assert_eq!(m.specialize(&[]).unwrap(), m);
    }

    #[test]
    fn specialize_creates_virtual_loops() {
        let f8 = Marking::standard(&WeightedGraph::rose(2));
        let s = f8.specialize(&[0]).unwrap();
        assert_eq!(s.base(), &WeightedGraph::new(vec![1], vec![(0, 0)]).unwrap());
        assert_eq!(s.render(), vec!["b", "a"]);
        assert!(s.graph().is_virtual(1));
        let full = f8.specialize(&[0, 1]).unwrap();
        assert_eq!(full.render(), vec!["a", "b"]);
        assert!(matches!(full.specialize(&[0]), Err(Error::VirtualEdge(0))));
    }

    #[test]
    fn marking_data_round_trip() {
        let m = intro_marking();
        let json = serde_json::to_string(&m.to_data()).unwrap();
        assert!(json.starts_with(r#"{"basepoint":1,"petals":[[{"edge":0,"dir":-1}"#));
        let back: MarkingData = serde_json::from_str(&json).unwrap();
        assert_eq!(Marking::from_data(&intro_graph(), &back).unwrap(), m);
    }
}
