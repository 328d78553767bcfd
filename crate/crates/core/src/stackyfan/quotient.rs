use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fan::{Cell, LatticeMap, StackyFan};
use crate::ratlin::{IntMatrix, Rat};
use crate::{Error, Result};

/// Default cap on group elements and orbit sizes.
pub const DEFAULT_BUDGET: usize = 10_000;

/// One generator of a group acting on a fan: an isomorphism from every cell
/// onto its image cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub maps: Vec<LatticeMap>,
}

/// Group action on the cells of a fan, given by generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAction {
    pub generators: Vec<Generator>,
}

impl GroupAction {
    pub fn trivial() -> Self {
        GroupAction::default()
    }

    /// Checks that each generator sends every cell isomorphically onto a
    /// cell by a unimodular matrix carrying rays to rays.
    pub fn check(&self, fan: &StackyFan) -> Result<()> {
        for g in &self.generators {
            let mut seen = vec![false; fan.cells.len()];
            for m in &g.maps {
                let bad = |msg: String| Err(Error::InvalidAction(format!("generator {}: {msg}", g.name)));
                if m.source >= fan.cells.len() || m.target >= fan.cells.len() {
                    return bad(format!("map {} -> {} refers to a missing cell", m.source, m.target));
                }
                if std::mem::replace(&mut seen[m.source], true) {
                    return bad(format!("cell {} has two images", m.source));
                }
                let (src, tgt) = (fan.cone(m.source), fan.cone(m.target));
                if m.matrix.rows() != tgt.ambient_dim() || m.matrix.cols() != src.ambient_dim() || !m.matrix.is_unimodular() {
                    return bad(format!("map on cell {} is not a unimodular square matrix", m.source));
                }
                let img: BTreeSet<_> = src.rays().iter().map(|r| m.apply_int(r)).collect();
                if img != tgt.rays().iter().cloned().collect() {
                    return bad(format!("cell {} is not carried onto cell {}", m.source, m.target));
                }
            }
            if let Some(c) = seen.iter().position(|s| !s) {
                return Err(Error::InvalidAction(format!("generator {} does not act on cell {c}", g.name)));
            }
        }
        Ok(())
    }

    fn image(&self, k: usize, cell: usize) -> &LatticeMap {
        self.generators[k].maps.iter().find(|m| m.source == cell).expect("checked action")
    }
}

/// A stratified quotient together with the data identifying it with the
/// orbit space.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub fan: StackyFan,
    /// Quotient cell of every cell of the original fan.
    pub orbit_of: Vec<usize>,
    /// Original cell chosen for every quotient cell.
    pub representatives: Vec<usize>,
    /// `transport[i]` carries the representative of the orbit of `i` onto `i`.
    pub transport: Vec<IntMatrix>,
}

impl Quotient {
    /// The quotient point of `x` in cell `cell` of the original fan: open
    /// quotient cell and coordinates minimized over its self-maps.
    pub fn point(&self, cell: usize, x: &[Rat]) -> Result<(usize, Vec<Rat>)> {
        let inv = self.transport[cell].unimodular_inverse().expect("transports are unimodular");
        let y = inv.to_rat().apply(x);
        match self.fan.representative(self.orbit_of[cell], &y) {
            Ok(Some(p)) => Ok(p),
            Ok(None) => Err(Error::NoMatchingCell("point lies on a removed face".into())),
            Err(v) => Err(Error::NoMatchingCell(v.witness)),
        }
    }
}

fn identity_of(fan: &StackyFan, cell: usize) -> IntMatrix {
    IntMatrix::identity(fan.cone(cell).ambient_dim())
}

fn closure(gens: &[IntMatrix], one: IntMatrix, budget: usize) -> Result<Vec<IntMatrix>> {
    let mut seen = BTreeSet::from([one.clone()]);
    let mut queue = VecDeque::from([one]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.mul(&x);
            if seen.insert(y.clone()) {
                if seen.len() > budget {
                    return Err(Error::CellBudget(budget));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Orbits of cells under the generators, each sorted, in order of their
/// smallest cell.
pub fn cell_orbits(fan: &StackyFan, act: &GroupAction) -> Result<Vec<Vec<usize>>> {
    act.check(fan)?;
    let n = fan.cells.len();
    let mut orbit_id = vec![usize::MAX; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if orbit_id[start] != usize::MAX {
            continue;
        }
        let mut orbit = vec![start];
        orbit_id[start] = orbits.len();
        let mut k = 0;
        while k < orbit.len() {
            let c = orbit[k];
            for g in 0..act.generators.len() {
                let t = act.image(g, c).target;
                if orbit_id[t] == usize::MAX {
                    orbit_id[t] = orbits.len();
                    orbit.push(t);
                } else if orbit_id[t] != orbits.len() {
                    return Err(Error::InvalidAction(format!("cell {t} is reached from two orbits")));
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// Stratified quotient with the smallest cell of every orbit as its
/// representative.
pub fn stratified_quotient(fan: &StackyFan, act: &GroupAction) -> Result<Quotient> {
    stratified_quotient_with(fan, act, |orbit| orbit[0], DEFAULT_BUDGET)
}

/// Stratified quotient with representatives chosen by `pick` from each
/// sorted orbit. Maps of the quotient are the face maps of the fan moved to
/// the representatives by the group, composed on both sides with the cell
/// stabilizers; the stabilizers themselves become self-maps.
pub fn stratified_quotient_with(
    fan: &StackyFan,
    act: &GroupAction,
    pick: impl Fn(&[usize]) -> usize,
    budget: usize,
) -> Result<Quotient> {
    let orbits = cell_orbits(fan, act)?;
    let n = fan.cells.len();
    let mut orbit_of = vec![0; n];
    let mut representatives = Vec::new();
    let mut transport: Vec<Option<IntMatrix>> = vec![None; n];
    for (q, orbit) in orbits.iter().enumerate() {
        let rep = pick(orbit);
        if !orbit.contains(&rep) {
            return Err(Error::InvalidAction(format!("representative {rep} is not in its orbit")));
        }
        representatives.push(rep);
        for &c in orbit {
            orbit_of[c] = q;
        }
        transport[rep] = Some(identity_of(fan, rep));
        let mut queue = VecDeque::from([rep]);
        while let Some(c) = queue.pop_front() {
            let t_c = transport[c].clone().unwrap();
            for g in 0..act.generators.len() {
                let m = act.image(g, c);
                if transport[m.target].is_none() {
                    transport[m.target] = Some(m.matrix.mul(&t_c));
                    queue.push_back(m.target);
                }
            }
        }
        if let Some(&c) = orbit.iter().find(|&&c| transport[c].is_none()) {
            return Err(Error::InvalidAction(format!("cell {c} is not reached from {rep} by the generators")));
        }
    }
    let transport: Vec<IntMatrix> = transport.into_iter().map(Option::unwrap).collect();
    let inverse: Vec<IntMatrix> = transport.iter().map(|t| t.unimodular_inverse().expect("unimodular")).collect();

    let mut stab_gens: Vec<Vec<IntMatrix>> = vec![Vec::new(); orbits.len()];
    for c in 0..n {
        for g in 0..act.generators.len() {
            let m = act.image(g, c);
            stab_gens[orbit_of[c]].push(inverse[m.target].mul(&m.matrix).mul(&transport[c]));
        }
    }
    let stabilizers: Vec<Vec<IntMatrix>> = (0..orbits.len())
        .map(|q| closure(&stab_gens[q], identity_of(fan, representatives[q]), budget))
        .collect::<Result<_>>()?;

    let mut maps: BTreeSet<LatticeMap> = BTreeSet::new();
    for (q, stab) in stabilizers.iter().enumerate() {
        for s in stab {
            if *s != identity_of(fan, representatives[q]) {
                maps.insert(LatticeMap { source: q, target: q, matrix: s.clone() });
            }
        }
    }
    for m in &fan.maps {
        let (qi, qj) = (orbit_of[m.source], orbit_of[m.target]);
        let base = inverse[m.target].mul(&m.matrix).mul(&transport[m.source]);
        for s in &stabilizers[qj] {
            for t in &stabilizers[qi] {
                maps.insert(LatticeMap { source: qi, target: qj, matrix: s.mul(&base).mul(t) });
                if maps.len() > budget * 10 {
                    return Err(Error::CellBudget(budget));
                }
            }
        }
    }
    let cells: Vec<Cell> = representatives.iter().map(|&r| fan.cells[r].clone()).collect();
    Ok(Quotient { fan: StackyFan::new(cells, maps.into_iter().collect()), orbit_of, representatives, transport })
}

/// Checks that `phis[q]` (from cell `q` of `a` to cell `cell_map[q]` of `b`)
/// carry cones onto cones and the map set of `a` exactly onto that of `b`.
pub fn is_fan_isomorphism(a: &StackyFan, b: &StackyFan, cell_map: &[usize], phis: &[IntMatrix]) -> bool {
    if a.cells.len() != b.cells.len() || cell_map.len() != a.cells.len() || phis.len() != a.cells.len() {
        return false;
    }
    let mut hit = vec![false; b.cells.len()];
    for (q, &t) in cell_map.iter().enumerate() {
        if t >= b.cells.len() || std::mem::replace(&mut hit[t], true) {
            return false;
        }
        let (ca, cb) = (a.cone(q), b.cone(t));
        if phis[q].rows() != cb.ambient_dim() || phis[q].cols() != ca.ambient_dim() || !phis[q].is_unimodular() {
            return false;
        }
        let img: BTreeSet<_> = ca.rays().iter().map(|r| phis[q].apply(r)).collect();
        if img != cb.rays().iter().cloned().collect() {
            return false;
        }
    }
    let inv: Vec<IntMatrix> = phis.iter().map(|p| p.unimodular_inverse().unwrap()).collect();
    let moved: BTreeSet<LatticeMap> = a
        .maps
        .iter()
        .map(|m| LatticeMap {
            source: cell_map[m.source],
            target: cell_map[m.target],
            matrix: phis[m.target].mul(&m.matrix).mul(&inv[m.source]),
        })
        .collect();
    moved == b.maps.iter().cloned().collect()
}

/// The face poset of a fan: `(i, j)` whenever some map sends cell `i` into
/// a proper face of cell `j`.
pub fn face_relation(fan: &StackyFan) -> BTreeSet<(usize, usize)> {
    fan.maps.iter().filter(|m| !m.is_self_map()).map(|m| (m.source, m.target)).collect()
}

/// A bijection of cells preserving dimensions and the face relation, if
/// one exists.
pub fn poset_isomorphism(a: &StackyFan, b: &StackyFan) -> Option<Vec<usize>> {
    let n = a.cells.len();
    if n != b.cells.len() {
        return None;
    }
    let (ra, rb) = (face_relation(a), face_relation(b));
    fn rec(
        i: usize,
        a: &StackyFan,
        b: &StackyFan,
        ra: &BTreeSet<(usize, usize)>,
        rb: &BTreeSet<(usize, usize)>,
        map: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        if i == a.cells.len() {
            return ra.len() == rb.len();
        }
        for t in 0..b.cells.len() {
            if used[t] || a.cone(i).dim() != b.cone(t).dim() || a.cone(i).rays().len() != b.cone(t).rays().len() {
                continue;
            }
            let consistent = (0..i).all(|k| {
                ra.contains(&(k, i)) == rb.contains(&(map[k], t)) && ra.contains(&(i, k)) == rb.contains(&(t, map[k]))
            });
            if !consistent {
                continue;
            }
            map.push(t);
            used[t] = true;
            if rec(i + 1, a, b, ra, rb, map, used) {
                return true;
            }
            map.pop();
            used[t] = false;
        }
        false
    }
    let mut map = Vec::new();
    let mut used = vec![false; n];
    rec(0, a, b, &ra, &rb, &mut map, &mut used).then_some(map)
}

/// Builds the quotient twice, with the smallest and the largest cell of
/// each orbit as representatives, and checks the results are isomorphic
/// through the transports.
pub fn representative_independence(fan: &StackyFan, act: &GroupAction) -> Result<bool> {
    let lo = stratified_quotient_with(fan, act, |o| o[0], DEFAULT_BUDGET)?;
    let hi = stratified_quotient_with(fan, act, |o| *o.last().unwrap(), DEFAULT_BUDGET)?;
    // Cell q of `lo` has representative r; `hi.transport[r]` goes from the
    // `hi` representative to r.
    let phis: Vec<IntMatrix> =
        lo.representatives.iter().map(|&r| hi.transport[r].unimodular_inverse().unwrap()).collect();
    let cell_map: Vec<usize> = lo.representatives.iter().map(|&r| hi.orbit_of[r]).collect();
    Ok(is_fan_isomorphism(&lo.fan, &hi.fan, &cell_map, &phis))
}

/// Outcome of [`quotient_point_bijection_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionReport {
    pub samples: usize,
    pub orbits: usize,
    pub violations: Vec<String>,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

// Open-cell representative of a point of the original fan.
fn open_point(fan: &StackyFan, cell: usize, x: &[Rat]) -> Result<(usize, Vec<Rat>)> {
    match fan.representative(cell, x) {
        Ok(Some(p)) => Ok(p),
        Ok(None) => Err(Error::NoMatchingCell("point lies on a removed face".into())),
        Err(v) => Err(Error::NoMatchingCell(v.witness)),
    }
}

/// Canonical element of the group orbit of a glued point: the smallest
/// open-cell representative reached by the generators.
fn orbit_key(fan: &StackyFan, act: &GroupAction, cell: usize, x: &[Rat], budget: usize) -> Result<(usize, Vec<Rat>)> {
    let start = open_point(fan, cell, x)?;
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((c, y)) = queue.pop_front() {
        for g in 0..act.generators.len() {
            let m = act.image(g, c);
            let (c2, y2) = (m.target, m.apply(&y));
            let orbit = fan.self_orbit(c2, &y2, budget)?;
            let p = (c2, orbit.into_iter().next().unwrap());
            if seen.insert(p.clone()) {
                if seen.len() > budget {
                    return Err(Error::OrbitBound(budget));
                }
                queue.push_back(p);
            }
        }
    }
    Ok(seen.into_iter().next().unwrap())
}

/// Samples points of the fan, moves each by a random group word, and checks
/// that two points have the same quotient point exactly when they lie in
/// the same group orbit.
pub fn quotient_point_bijection_check(fan: &StackyFan, act: &GroupAction, samples: usize, seed: u64) -> Result<BijectionReport> {
    let quotient = stratified_quotient(fan, act)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_point: BTreeMap<(usize, Vec<Rat>), (usize, Vec<Rat>)> = BTreeMap::new();
    let mut by_orbit: BTreeMap<(usize, Vec<Rat>), (usize, Vec<Rat>)> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut taken = 0;
    for _ in 0..samples {
        let Some((c, x)) = fan.sample_point(&mut rng) else { break };
        taken += 1;
        let mut moved = (c, x.clone());
        for _ in 0..rng.gen_range(0..=6) {
            if let Some(g) = (0..act.generators.len()).collect::<Vec<_>>().choose(&mut rng) {
                let m = act.image(*g, moved.0);
                moved = (m.target, m.apply(&moved.1));
            }
        }
        let qp = quotient.point(c, &x)?;
        let qm = quotient.point(moved.0, &moved.1)?;
        if qp != qm {
            violations.push(format!("point {x:?} of cell {c} and its translate have different quotient points"));
        }
        let key = orbit_key(fan, act, c, &x, DEFAULT_BUDGET)?;
        if let Some(prev) = by_point.insert(qp.clone(), key.clone()) {
            if prev != key {
                violations.push(format!("quotient point {qp:?} is hit by two orbits"));
            }
        }
        if let Some(prev) = by_orbit.insert(key, qp.clone()) {
            if prev != qp {
                violations.push(format!("one orbit has quotient points {prev:?} and {qp:?}"));
            }
        }
    }
    Ok(BijectionReport { samples: taken, orbits: by_orbit.len(), violations })
}
