use serde::{Deserialize, Serialize};

use super::path::{cyclic_core, inverse_path, reduce, root, EdgePath, Step};
use super::Marking;
use crate::graphs::{canonical_form, isomorphisms, mask_to_subset, spanning_tree, tree_path, Isomorphism, VirtualGraph};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceMode {
    /// Graph automorphism of `Γ^w` plus a change of basepoint.
    Strict,
    /// As strict, after erasing every virtual-loop step.
    Weak,
}

// Map of `Γ^w` edges: image edge and whether the orientation is reversed.
pub(crate) type EdgeImage = Vec<(usize, bool)>;

pub(crate) fn map_path(p: &[Step], images: &EdgeImage) -> EdgePath {
    reduce(
        &p.iter()
            .map(|s| {
                let (e, flip) = images[s.edge];
                Step::new(e, if flip { -s.dir } else { s.dir })
            })
            .collect::<Vec<_>>(),
    )
}

fn erase_virtual(g: &VirtualGraph, p: &[Step]) -> EdgePath {
    reduce(&p.iter().copied().filter(|s| !g.is_virtual(s.edge)).collect::<Vec<_>>())
}

// Calls `f` on every extension of `iso` to `Γ^w`: base loops may be
// reversed, and with `virtuals` the virtual loops at each vertex are
// permuted and reversed freely. Stops at the first `true`.
pub(crate) fn for_each_extension(a: &VirtualGraph, b: &VirtualGraph, iso: &Isomorphism, virtuals: bool, f: &mut dyn FnMut(&EdgeImage) -> bool) -> bool {
    let base = a.base();
    let mut images: EdgeImage = (0..a.num_edges())
        .map(|e| if a.is_virtual(e) { (e, false) } else { (iso.edge_map[e], iso.edge_flip[e]) })
        .collect();
    // Each slot lists alternative assignments for a group of edges.
    let mut slots: Vec<Vec<Vec<(usize, usize, bool)>>> = Vec::new();
    for e in 0..base.num_edges() {
        if base.is_loop(e) {
            let t = iso.edge_map[e];
            slots.push(vec![vec![(e, t, false)], vec![(e, t, true)]]);
        }
    }
    if virtuals {
        for v in 0..a.num_vertices() {
            let src = a.virtual_loops_at(v);
            let dst = b.virtual_loops_at(iso.vertex_map[v]);
            if src.is_empty() {
                continue;
            }
            let mut alts = Vec::new();
            for perm in permutations(dst.len()) {
                for flips in 0u32..(1 << src.len()) {
                    alts.push(src.iter().enumerate().map(|(i, &s)| (s, dst[perm[i]], flips & (1 << i) != 0)).collect());
                }
            }
            slots.push(alts);
        }
    }
    fn rec(slots: &[Vec<Vec<(usize, usize, bool)>>], k: usize, images: &mut EdgeImage, f: &mut dyn FnMut(&EdgeImage) -> bool) -> bool {
        if k == slots.len() {
            return f(images);
        }
        for alt in &slots[k] {
            for &(s, t, flip) in alt {
                images[s] = (t, flip);
            }
            if rec(slots, k + 1, images, f) {
                return true;
            }
        }
        false
    }
    rec(&slots, 0, &mut images, f)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Is there a closed path `c` at the basepoint with `q_i = c p_i c^-1` for
/// every `i`? Both tuples are reduced loops at the same vertex.
fn conjugate(p: &[EdgePath], q: &[EdgePath]) -> bool {
    let Some(k) = p.iter().position(|x| !x.is_empty()) else {
        return q.iter().all(|x| x.is_empty());
    };
    let (u, core_p) = cyclic_core(&p[k]);
    let (v, core_q) = cyclic_core(&q[k]);
    if core_p.len() != core_q.len() {
        return false;
    }
    let r = root(&core_p);
    let total: usize = p.iter().chain(q).map(Vec::len).sum();
    let bound = (total / r.len() + 2) as i64;
    let n = core_p.len();
    let u_inv = inverse_path(&u);
    for shift in 0..n {
        if (0..n).any(|i| core_p[(shift + i) % n] != core_q[i]) {
            continue;
        }
        // core_q = t s with core_p = s t; then v t r^j u^-1 conjugates.
        let t = &core_p[shift..];
        for j in 0..=2 * bound {
            let j = if j % 2 == 0 { j / 2 } else { -(j + 1) / 2 };
            let c = reduce(&[v.as_slice(), t, &super::path::power(&r, j), &u_inv].concat());
            let c_inv = inverse_path(&c);
            if p.iter().zip(q).all(|(a, b)| reduce(&[c.as_slice(), a, &c_inv].concat()) == *b) {
                return true;
            }
        }
    }
    false
}

/// Decides equivalence of two markings of isomorphic weighted graphs.
pub fn markings_equivalent(m1: &Marking, m2: &Marking, mode: EquivalenceMode) -> Result<bool> {
    if m1.genus() != m2.genus() {
        return Err(Error::GraphMismatch);
    }
    let (a, b) = (m1.graph(), m2.graph());
    let isos = isomorphisms(a.base(), b.base())?;
    if isos.is_empty() {
        return Err(Error::GraphMismatch);
    }
    let strict = mode == EquivalenceMode::Strict;
    let prep = |g: &VirtualGraph, ps: &[EdgePath]| -> Vec<EdgePath> {
        ps.iter().map(|p| if strict { p.clone() } else { erase_virtual(g, p) }).collect()
    };
    let p1 = prep(a, m1.petals());
    let q = prep(b, m2.petals());
    let tree = spanning_tree(b.base());
    for iso in &isos {
        let x0 = iso.vertex_map[m1.basepoint()];
        let delta: EdgePath =
            tree_path(b.base(), &tree, m2.basepoint(), x0).into_iter().map(|(e, d)| Step::new(e, d as i8)).collect();
        let delta_inv = inverse_path(&delta);
        let found = for_each_extension(a, b, iso, strict, &mut |images| {
            let moved: Vec<EdgePath> =
                p1.iter().map(|p| reduce(&[delta.as_slice(), &map_path(p, images), &delta_inv].concat())).collect();
            conjugate(&moved, &q)
        });
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One face of a marked cell: the specializations of the marked graph that
/// are strictly equivalent to each other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedFace {
    /// First contracted edge set realizing the face.
    pub edges: Vec<usize>,
    /// Every contracted edge set realizing it, in bitmask order.
    pub subsets: Vec<Vec<usize>>,
    pub marking: Marking,
}

/// All specializations of a marked graph, grouped by strict equivalence.
pub fn cell_star(m: &Marking) -> Result<Vec<MarkedFace>> {
    let e = m.graph().num_base_edges();
    if e > 16 {
        return Err(Error::SizeGuard { what: "edge count", value: e, limit: 16 });
    }
    let mut faces: Vec<(crate::graphs::CanonicalKey, MarkedFace)> = Vec::new();
    for mask in 0u32..(1 << e) {
        let subset = mask_to_subset(mask, e);
        let sm = m.specialize(&subset)?;
        let key = canonical_form(sm.base())?.key;
        let mut placed = false;
        for (k, face) in faces.iter_mut() {
            if *k == key && markings_equivalent(&face.marking, &sm, EquivalenceMode::Strict)? {
                face.subsets.push(subset.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            faces.push((key, MarkedFace { edges: subset.clone(), subsets: vec![subset], marking: sm }));
        }
    }
    Ok(faces.into_iter().map(|(_, f)| f).collect())
}
