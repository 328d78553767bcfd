use super::WeightedGraph;

/// A weighted graph with `w(v)` extra loops attached at every vertex `v`.
///
/// Edge ids `0..m` are the base edges; ids `m..m + |w|` are the virtual loops,
/// numbered by owning vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VirtualGraph {
    base: WeightedGraph,
    owners: Vec<usize>,
}

impl VirtualGraph {
    pub fn new(base: WeightedGraph) -> Self {
        let owners = (0..base.num_vertices())
            .flat_map(|v| std::iter::repeat_n(v, base.weight(v) as usize))
            .collect();
        VirtualGraph { base, owners }
    }

    pub fn base(&self) -> &WeightedGraph {
        &self.base
    }

    pub fn num_base_edges(&self) -> usize {
        self.base.num_edges()
    }

    pub fn num_virtual(&self) -> usize {
        self.owners.len()
    }

    pub fn num_edges(&self) -> usize {
        self.base.num_edges() + self.owners.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.base.num_vertices()
    }

    pub fn is_virtual(&self, e: usize) -> bool {
        e >= self.base.num_edges()
    }

    /// Owning vertex of each virtual loop.
    pub fn virtual_owners(&self) -> &[usize] {
        &self.owners
    }

    /// Edge ids of the virtual loops at `v`.
    pub fn virtual_loops_at(&self, v: usize) -> Vec<usize> {
        let m = self.base.num_edges();
        self.owners.iter().enumerate().filter(|(_, &o)| o == v).map(|(i, _)| m + i).collect()
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        if self.is_virtual(e) {
            let v = self.owners[e - self.base.num_edges()];
            (v, v)
        } else {
            self.base.endpoints(e)
        }
    }

    /// The underlying unweighted graph, virtual loops included.
    pub fn underlying(&self) -> WeightedGraph {
        let mut edges = self.base.edges().to_vec();
        edges.extend(self.owners.iter().map(|&v| (v, v)));
        WeightedGraph { weights: vec![0; self.base.num_vertices()], edges }
    }

    pub fn genus(&self) -> usize {
        self.base.genus()
    }
}

pub fn virtual_graph(g: &WeightedGraph) -> VirtualGraph {
    VirtualGraph::new(g.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn virtual_examples() {
        let v = virtual_graph(&WeightedGraph::point(2));
        assert_eq!(v.underlying(), WeightedGraph::rose(2).relabel(&[0], &[0, 1]));
        assert_eq!(v.underlying().genus(), 2);

        let f8 = virtual_graph(&WeightedGraph::rose(2));
        assert_eq!(f8.num_virtual(), 0);

        let lw = virtual_graph(&WeightedGraph::new(vec![1], vec![(0, 0)]).unwrap());
        assert_eq!(lw.num_edges(), 2);
        assert!(!lw.is_virtual(0) && lw.is_virtual(1));
        assert_eq!(lw.virtual_loops_at(0), vec![1]);
        assert_eq!(lw.underlying().first_betti(), lw.genus());
    }
}
