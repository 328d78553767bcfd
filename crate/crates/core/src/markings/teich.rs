//! Finite model of the Teichmüller cells up to a level structure.
//!
//! Marked cells `(Γ, w, h)` are taken up to weak equivalence and modulo the
//! subgroup of `Out(F_g)` acting trivially on `H1(F_g, Z/n)`. A class is
//! determined by the graph and the `H1(Γ)` block of the marking mod `n`, up
//! to the automorphisms of `Γ`. The quotient group `GL_g(Z/n)` then acts
//! with finitely many cells.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::equiv::{for_each_extension, map_path, EdgeImage};
use super::{apply_auto, Marking, NielsenAuto, NielsenMove};
use crate::graphs::{automorphisms, isomorphisms, virtual_graph, VirtualGraph};
use crate::moduli::{cell_label, Catalogue};
use crate::ratlin::IntMatrix;
use crate::stackyfan::{Cell, Generator, GroupAction, IdealCone, LatticeMap, StackyFan};
use crate::{Error, Result};

type Key = Vec<i64>;

/// A symmetry of `Γ^w`: vertex map and edge images.
type Symmetry = (Vec<usize>, EdgeImage);

struct GraphData {
    vg: VirtualGraph,
    symmetries: Vec<Symmetry>,
}

/// Marked cells modulo level `n`, the glued fan they form, and the action
/// of `Out(F_g)` through `GL_g(Z/n)`.
#[derive(Clone, Debug)]
pub struct LevelModel {
    pub genus: usize,
    pub level: u32,
    pub catalogue: Catalogue,
    pub fan: StackyFan,
    pub action: GroupAction,
    /// Representative marking of every cell, on its catalogue graph.
    pub markings: Vec<Marking>,
    /// Catalogue index of the graph of every cell.
    pub graph_of: Vec<usize>,
}

/// Nielsen generators of `Aut(F_g)`: swaps with the first generator, one
/// inversion and one product.
pub fn nielsen_generators(g: usize) -> Vec<(String, NielsenMove)> {
    let mut out: Vec<(String, NielsenMove)> = (1..g).map(|i| (format!("swap_0_{i}"), NielsenMove::Swap(0, i))).collect();
    out.push(("invert_0".into(), NielsenMove::Invert(0)));
    if g > 1 {
        out.push(("mul_0_1".into(), NielsenMove::Mul(0, 1)));
    }
    out
}

fn apply_symmetry(vg: &VirtualGraph, m: &Marking, s: &Symmetry) -> Marking {
    let petals = m.petals().iter().map(|p| map_path(p, &s.1)).collect();
    Marking::from_parts(vg.clone(), s.0[m.basepoint()], petals)
}

// The virtual-loop block is dropped: it depends on the spanning forest
// used when specializing.
fn key_of(m: &Marking, n: u32) -> Key {
    let n = BigInt::from(n);
    let h = m.h1_matrix();
    let b1 = m.base().first_betti();
    (0..h.rows()).flat_map(|i| (0..b1).map(move |j| (i, j))).map(|(i, j)| h.get(i, j).mod_floor(&n).to_i64().unwrap()).collect()
}

struct Builder {
    level: u32,
    graphs: Vec<GraphData>,
    cells: BTreeMap<(usize, Key), usize>,
    reps: Vec<(usize, Marking)>,
    budget: usize,
}

impl Builder {
    /// Normal form of a marking on catalogue graph `b`: the symmetry image
    /// with the smallest H1 matrix mod `n`.
    fn normalize(&self, b: usize, m: &Marking) -> (Key, Marking) {
        let data = &self.graphs[b];
        data.symmetries
            .iter()
            .map(|s| {
                let img = apply_symmetry(&data.vg, m, s);
                (key_of(&img, self.level), img)
            })
            .min_by(|x, y| x.0.cmp(&y.0))
            .expect("the identity is a symmetry")
    }

    fn intern(&mut self, b: usize, m: &Marking, queue: &mut VecDeque<usize>) -> Result<usize> {
        let (key, rep) = self.normalize(b, m);
        if let Some(&c) = self.cells.get(&(b, key.clone())) {
            return Ok(c);
        }
        if self.reps.len() >= self.budget {
            return Err(Error::CellBudget(self.budget));
        }
        let c = self.reps.len();
        self.cells.insert((b, key), c);
        self.reps.push((b, rep));
        queue.push_back(c);
        Ok(c)
    }

    /// Moves a marking on a contraction of a catalogue graph onto the
    /// catalogue graph `b` itself.
    fn transport(&self, b: usize, m: &Marking) -> Result<(Marking, Vec<usize>)> {
        let target = &self.graphs[b].vg;
        let iso = isomorphisms(m.base(), target.base())?.into_iter().next().ok_or(Error::GraphMismatch)?;
        let mut images = None;
        for_each_extension(m.graph(), target, &iso, true, &mut |img| {
            images = Some(img.clone());
            true
        });
        let images = images.expect("isomorphisms extend");
        let petals = m.petals().iter().map(|p| map_path(p, &images)).collect();
        let edge_map = (0..m.graph().num_base_edges()).map(|e| images[e].0).collect();
        Ok((Marking::from_parts(target.clone(), iso.vertex_map[m.basepoint()], petals), edge_map))
    }

    /// Symmetries of graph `b` taking `m` to the representative of `cell`.
    fn matching(&self, b: usize, m: &Marking, cell: usize) -> Vec<&Symmetry> {
        let data = &self.graphs[b];
        let want = key_of(&self.reps[cell].1, self.level);
        data.symmetries.iter().filter(|s| key_of(&apply_symmetry(&data.vg, m, s), self.level) == want).collect()
    }
}

fn permutation(rows: usize, cols: usize, entry: impl Fn(usize) -> usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols);
    for j in 0..cols {
        m.set(entry(j), j, BigInt::from(1));
    }
    m
}

/// Builds the level-`n` model in genus `g`. `budget` caps the number of
/// cells.
pub fn level_model(g: usize, level: u32, budget: usize) -> Result<LevelModel> {
    if level < 2 {
        return Err(Error::Unsupported("level must be at least 2".into()));
    }
    let catalogue = Catalogue::new(g)?;
    let mut graphs = Vec::new();
    for graph in &catalogue.graphs {
        let vg = virtual_graph(graph);
        let mut symmetries = Vec::new();
        for iso in automorphisms(graph)? {
            for_each_extension(&vg, &vg, &iso, false, &mut |img| {
                symmetries.push((iso.vertex_map.clone(), img.clone()));
                false
            });
        }
        graphs.push(GraphData { vg, symmetries });
    }
    let mut builder = Builder { level, graphs, cells: BTreeMap::new(), reps: Vec::new(), budget };
    let moves = nielsen_generators(g);

    let mut queue = VecDeque::new();
    for b in 0..catalogue.len() {
        builder.intern(b, &Marking::standard(&catalogue.graphs[b]), &mut queue)?;
    }
    while let Some(c) = queue.pop_front() {
        let (b, rep) = builder.reps[c].clone();
        for (_, mv) in &moves {
            let moved = apply_auto(&rep, &NielsenAuto::new(vec![*mv]))?;
            builder.intern(b, &moved, &mut queue)?;
        }
        let e = rep.base().num_edges();
        for mask in 1u32..(1 << e) {
            let s = crate::graphs::mask_to_subset(mask, e);
            let sm = rep.specialize(&s)?;
            let b2 = catalogue.find(sm.base())?;
            let (moved, _) = builder.transport(b2, &sm)?;
            builder.intern(b2, &moved, &mut queue)?;
        }
    }

    // Deterministic cell order: by graph, then by key.
    let order: Vec<usize> = builder.cells.values().copied().collect();
    let mut new_index = vec![0; order.len()];
    for (i, &c) in order.iter().enumerate() {
        new_index[c] = i;
    }
    let mut counter: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cells = Vec::new();
    for &c in &order {
        let b = builder.reps[c].0;
        let k = counter.entry(b).or_default();
        let graph = &catalogue.graphs[b];
        cells.push(Cell { label: format!("{}/{}", cell_label(graph), k), cone: IdealCone::orthant(graph.num_edges(), &[])? });
        *k += 1;
    }

    let mut maps = Vec::new();
    let mut generators: Vec<Generator> =
        moves.iter().map(|(name, _)| Generator { name: name.clone(), maps: Vec::new() }).collect();
    for &c in &order {
        let (b, rep) = builder.reps[c].clone();
        let e = rep.base().num_edges();
        for (k, (_, mv)) in moves.iter().enumerate() {
            let moved = apply_auto(&rep, &NielsenAuto::new(vec![*mv]))?;
            let (key, _) = builder.normalize(b, &moved);
            let target = builder.cells[&(b, key)];
            let s = builder.matching(b, &moved, target)[0];
            generators[k].maps.push(LatticeMap {
                source: new_index[c],
                target: new_index[target],
                matrix: permutation(e, e, |j| s.1[j].0),
            });
        }
        for mask in 0u32..(1 << e) {
            let subset = crate::graphs::mask_to_subset(mask, e);
            let sm = rep.specialize(&subset)?;
            let contraction = rep.base().contract_with_maps(&subset)?;
            let b2 = catalogue.find(sm.base())?;
            let (moved, psi) = builder.transport(b2, &sm)?;
            let (key, _) = builder.normalize(b2, &moved);
            let source = builder.cells[&(b2, key)];
            let e2 = catalogue.graphs[b2].num_edges();
            for s in builder.matching(b2, &moved, source) {
                // Source edge j is the image of exactly one surviving edge.
                let mut old = vec![0; e2];
                for (olde, newe) in contraction.edge_map.iter().enumerate() {
                    if let Some(k) = newe {
                        old[s.1[psi[*k]].0] = olde;
                    }
                }
                maps.push(LatticeMap { source: new_index[source], target: new_index[c], matrix: permutation(e, e2, |j| old[j]) });
            }
        }
    }
    maps.sort();
    maps.dedup();
    let markings = order.iter().map(|&c| builder.reps[c].1.clone()).collect();
    let graph_of = order.iter().map(|&c| builder.reps[c].0).collect();
    Ok(LevelModel {
        genus: g,
        level,
        catalogue,
        fan: StackyFan::new(cells, maps),
        action: GroupAction { generators },
        markings,
        graph_of,
    })
}

/// Order of `GL_g(Z/p)` for a prime `p`.
pub fn gl_order(g: u32, p: u64) -> u64 {
    let q = p.pow(g);
    (0..g).map(|i| q - p.pow(i)).product()
}
