use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cone::{Face, IdealCone};
use crate::ratlin::{is_saturated, saturate, IntMatrix, Rat, RatMatrix};
use crate::{Error, Result};

/// Integral linear map between the ambient spaces of two cells,
/// `x -> matrix * x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticeMap {
    pub source: usize,
    pub target: usize,
    pub matrix: IntMatrix,
}

impl LatticeMap {
    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        self.matrix.to_rat().apply(x)
    }

    pub fn apply_int(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.apply(x)
    }

    pub fn is_self_map(&self) -> bool {
        self.source == self.target
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub label: String,
    pub cone: IdealCone,
}

/// Cells glued along lattice-preserving face maps.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StackyFan {
    pub cells: Vec<Cell>,
    pub maps: Vec<LatticeMap>,
}

/// One failed condition, with a human readable witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: String,
    pub map: Option<usize>,
    pub cell: Option<usize>,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanReport {
    pub checked_maps: usize,
    pub sampled_points: usize,
    pub violations: Vec<Violation>,
}

impl FanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn violation(kind: &str, map: Option<usize>, cell: Option<usize>, witness: String) -> Violation {
    Violation { kind: kind.to_string(), map, cell, witness }
}

fn to_rat_vec(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

fn fmt_vec<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl StackyFan {
    pub fn new(cells: Vec<Cell>, maps: Vec<LatticeMap>) -> Self {
        StackyFan { cells, maps }
    }

    pub fn cone(&self, i: usize) -> &IdealCone {
        &self.cells[i].cone
    }

    pub fn maps_into(&self, target: usize) -> impl Iterator<Item = (usize, &LatticeMap)> {
        self.maps.iter().enumerate().filter(move |(_, m)| m.target == target)
    }

    pub fn self_maps(&self, cell: usize) -> Vec<&LatticeMap> {
        self.maps.iter().filter(|m| m.source == cell && m.target == cell).collect()
    }

    /// Ray indices (in the target) hit by the source rays, if every ray goes
    /// to a ray.
    pub fn image_face(&self, map: &LatticeMap) -> Option<Face> {
        let src = self.cone(map.source);
        let tgt = self.cone(map.target);
        let mut face = BTreeSet::new();
        for r in src.rays() {
            let img = map.apply_int(r);
            face.insert(tgt.rays().iter().position(|t| *t == img)?);
        }
        Some(face.into_iter().collect())
    }

    fn check_map(&self, i: usize) -> Vec<Violation> {
        let map = &self.maps[i];
        let mut out = Vec::new();
        if map.source >= self.cells.len() || map.target >= self.cells.len() {
            out.push(violation("dimension", Some(i), None, "map refers to a missing cell".into()));
            return out;
        }
        let src = self.cone(map.source);
        let tgt = self.cone(map.target);
        if map.matrix.rows() != tgt.ambient_dim() || map.matrix.cols() != src.ambient_dim() {
            out.push(violation(
                "dimension",
                Some(i),
                None,
                format!(
                    "matrix is {}x{}, cells need {}x{}",
                    map.matrix.rows(),
                    map.matrix.cols(),
                    tgt.ambient_dim(),
                    src.ambient_dim()
                ),
            ));
            return out;
        }
        for r in src.rays() {
            let img = map.apply_int(r);
            if !tgt.rays().contains(&img) {
                out.push(violation(
                    "ray_primitivity",
                    Some(i),
                    Some(map.target),
                    format!("ray {} maps to {}, not a primitive ray of the target", fmt_vec(r), fmt_vec(&img)),
                ));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let face = self.image_face(map).expect("rays checked above");
        if face.len() != src.rays().len() || !tgt.is_face(&face) || tgt.face_dim(&face) != src.dim() {
            out.push(violation("face", Some(i), Some(map.target), format!("image rays {face:?} do not form a face of the same dimension")));
            return out;
        }
        let ray_image: Vec<usize> = src
            .rays()
            .iter()
            .map(|r| {
                let img = map.apply_int(r);
                tgt.rays().iter().position(|t| *t == img).unwrap()
            })
            .collect();
        for g in src.faces() {
            let mut img: Vec<usize> = g.iter().map(|&j| ray_image[j]).collect();
            img.sort_unstable();
            if src.is_removed(g) != tgt.is_removed(&img) {
                out.push(violation(
                    "removed_face",
                    Some(i),
                    Some(map.target),
                    format!(
                        "face {g:?} is {} but its image {img:?} is {}",
                        if src.is_removed(g) { "removed" } else { "retained" },
                        if tgt.is_removed(&img) { "removed" } else { "retained" }
                    ),
                ));
            }
        }
        if !src.rays().is_empty() {
            let basis = saturate(&src.ray_matrix());
            let image = basis.mul(&map.matrix.transpose());
            if !is_saturated(&image) {
                out.push(violation(
                    "lattice",
                    Some(i),
                    Some(map.target),
                    format!("image of the lattice basis {} is not saturated", image),
                ));
            }
        }
        out
    }

    /// Preimage of `x` under a face map, inside the span of the source cone.
    fn preimage(&self, map: &LatticeMap, x: &[Rat]) -> Option<Vec<Rat>> {
        let src = self.cone(map.source);
        if src.rays().is_empty() {
            return Some(vec![Rat::from_integer(0.into()); src.ambient_dim()]);
        }
        let r = src.ray_matrix().to_rat();
        let a: RatMatrix = map.matrix.to_rat().mul(&r.transpose());
        let c = a.solve(x)?;
        Some(r.transpose().apply(&c))
    }

    /// Orbit of a point of `cell` under the self-maps of that cell.
    pub fn self_orbit(&self, cell: usize, x: &[Rat], budget: usize) -> Result<BTreeSet<Vec<Rat>>> {
        let maps = self.self_maps(cell);
        let mut seen = BTreeSet::from([x.to_vec()]);
        let mut queue = VecDeque::from([x.to_vec()]);
        while let Some(y) = queue.pop_front() {
            for m in &maps {
                let z = m.apply(&y);
                if seen.insert(z.clone()) {
                    if seen.len() > budget {
                        return Err(Error::OrbitBound(budget));
                    }
                    queue.push_back(z);
                }
            }
        }
        Ok(seen)
    }

    /// The open cell representing the glued point `x` of `cell`, with
    /// coordinates minimized over the self-map orbit. `Ok(None)` means the
    /// point lies on a removed face.
    pub fn representative(&self, cell: usize, x: &[Rat]) -> std::result::Result<Option<(usize, Vec<Rat>)>, Violation> {
        let cone = self.cone(cell);
        let Some(face) = cone.carrier(x) else {
            return Err(violation("outside", None, Some(cell), format!("point {} is not in the cone", fmt_vec(x))));
        };
        if cone.is_removed(&face) {
            return Ok(None);
        }
        let mut candidates: Vec<(usize, Vec<Rat>)> = Vec::new();
        if face.len() == cone.rays().len() {
            candidates.push((cell, x.to_vec()));
        }
        for (i, m) in self.maps_into(cell) {
            if self.image_face(m).as_deref() != Some(&face[..]) {
                continue;
            }
            match self.preimage(m, x) {
                Some(y) => candidates.push((m.source, y)),
                None => return Err(violation("face", Some(i), Some(cell), "point has no preimage".into())),
            }
        }
        let Some((b, y0)) = candidates.first().cloned() else {
            return Err(violation(
                "uncovered",
                None,
                Some(cell),
                format!("point {} on face {face:?} is not the image of any open cell", fmt_vec(x)),
            ));
        };
        if let Some((c, _)) = candidates.iter().find(|(c, _)| *c != b) {
            return Err(violation(
                "multiple_cells",
                None,
                Some(cell),
                format!("point {} is the image of open cells {b} and {c}", fmt_vec(x)),
            ));
        }
        let orbit = self
            .self_orbit(b, &y0, 100_000)
            .map_err(|e| violation("orbit", None, Some(b), e.to_string()))?;
        if let Some((_, y)) = candidates.iter().find(|(_, y)| !orbit.contains(y)) {
            return Err(violation(
                "multiple_points",
                None,
                Some(b),
                format!("open cell {b} represents the point twice: {} and {}", fmt_vec(&y0), fmt_vec(y)),
            ));
        }
        Ok(Some((b, orbit.into_iter().next().unwrap())))
    }

    /// Random point in the relative interior of a random retained face.
    pub fn sample_point<R: Rng>(&self, rng: &mut R) -> Option<(usize, Vec<Rat>)> {
        let cells: Vec<usize> = (0..self.cells.len()).filter(|&c| !self.cone(c).retained_faces().is_empty()).collect();
        let &c = cells.choose(rng)?;
        let cone = self.cone(c);
        let faces = cone.retained_faces();
        let face = faces.choose(rng)?;
        let mut x = vec![BigInt::from(0); cone.ambient_dim()];
        for &i in face {
            let k = BigInt::from(rng.gen_range(1..=9));
            for (xj, rj) in x.iter_mut().zip(&cone.rays()[i]) {
                *xj += &k * rj;
            }
        }
        Some((c, to_rat_vec(&x)))
    }

    /// Checks every map and samples the cell-partition law: each sampled
    /// point has exactly one open-cell representative, and face maps do not
    /// change it.
    pub fn validate(&self, samples: usize, seed: u64) -> FanReport {
        let mut violations: Vec<Violation> = (0..self.maps.len()).flat_map(|i| self.check_map(i)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sampled = 0;
        if violations.is_empty() {
            for _ in 0..samples {
                let Some((c, x)) = self.sample_point(&mut rng) else { break };
                sampled += 1;
                let rep = match self.representative(c, &x) {
                    Ok(r) => r,
                    Err(v) => {
                        violations.push(v);
                        break;
                    }
                };
                let outgoing: Vec<&LatticeMap> = self.maps.iter().filter(|m| m.source == c).collect();
                if let Some(m) = outgoing.choose(&mut rng) {
                    let y = m.apply(&x);
                    match self.representative(m.target, &y) {
                        Ok(r2) if r2 == rep => {}
                        Ok(_) => {
                            violations.push(violation(
                                "partition",
                                None,
                                Some(c),
                                format!("point {} of cell {c} and its image in cell {} have different open cells", fmt_vec(&x), m.target),
                            ));
                            break;
                        }
                        Err(v) => {
                            violations.push(v);
                            break;
                        }
                    }
                }
            }
        }
        FanReport { checked_maps: self.maps.len(), sampled_points: sampled, violations }
    }

    /// Finitely many distinct maps between each ordered pair of cells.
    pub fn map_multiplicities(&self) -> Vec<((usize, usize), usize)> {
        let mut pairs: std::collections::BTreeMap<(usize, usize), BTreeSet<&IntMatrix>> = Default::default();
        for m in &self.maps {
            pairs.entry((m.source, m.target)).or_default().insert(&m.matrix);
        }
        pairs.into_iter().map(|(k, v)| (k, v.len())).collect()
    }
}

pub fn validate_fan(fan: &StackyFan, samples: usize, seed: u64) -> FanReport {
    fan.validate(samples, seed)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn swap_fan() -> StackyFan {
        // Orthant with its two rays and the origin, glued along all faces.
        let cells = vec![
            Cell { label: "quadrant".into(), cone: IdealCone::orthant(2, &[]).unwrap() },
            Cell { label: "ray".into(), cone: IdealCone::orthant(1, &[]).unwrap() },
            Cell { label: "origin".into(), cone: IdealCone::orthant(0, &[]).unwrap() },
        ];
        let maps = vec![
            LatticeMap { source: 1, target: 0, matrix: IntMatrix::from_i64(&[vec![1], vec![0]]) },
            LatticeMap { source: 1, target: 0, matrix: IntMatrix::from_i64(&[vec![0], vec![1]]) },
            LatticeMap { source: 2, target: 0, matrix: IntMatrix::zeros(2, 0) },
            LatticeMap { source: 2, target: 1, matrix: IntMatrix::zeros(1, 0) },
        ];
        StackyFan::new(cells, maps)
    }

    #[test]
    fn valid_fan_passes() {
        let r = swap_fan().validate(200, 7);
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.sampled_points, 200);
    }

    #[test]
    fn non_saturated_map_fails() {
        let mut fan = swap_fan();
        fan.cells[1].cone = IdealCone::orthant(1, &[]).unwrap();
        fan.maps[0].matrix = IntMatrix::from_i64(&[vec![2], vec![0]]);
        let r = fan.validate(10, 1);
        assert!(r.violations.iter().any(|v| v.kind == "ray_primitivity"));
    }

    #[test]
    fn lattice_violation_detected() {
        // A cone whose ray is (1,1) inside the lattice spanned by (1,1),(1,-1)
        // in a target where that sublattice has index 2.
        let cells = vec![
            Cell { label: "a".into(), cone: IdealCone::orthant(2, &[]).unwrap() },
            Cell {
                label: "b".into(),
                cone: IdealCone::new(2, &[vec![BigInt::from(1), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(-1)]], &[]).unwrap(),
            },
        ];
        let maps = vec![LatticeMap { source: 0, target: 1, matrix: IntMatrix::from_i64(&[vec![1, 1], vec![1, -1]]) }];
        let r = StackyFan::new(cells, maps).validate(0, 0);
        assert!(r.violations.iter().any(|v| v.kind == "lattice"), "{:?}", r.violations);
    }

    #[test]
    fn map_into_removed_face_fails() {
        let mut fan = swap_fan();
        fan.cells[0].cone = IdealCone::orthant(2, &[vec![0]]).unwrap();
        let r = fan.validate(10, 1);
        assert!(r.violations.iter().any(|v| v.kind == "removed_face"));
    }

    #[test]
    fn missing_face_map_is_uncovered() {
        let mut fan = swap_fan();
        fan.maps.remove(1);
        let r = fan.validate(300, 3);
        assert!(r.violations.iter().any(|v| v.kind == "uncovered"));
    }

    #[test]
    fn multiplicities_are_finite() {
        assert_eq!(swap_fan().map_multiplicities(), vec![((1, 0), 2), ((2, 0), 1), ((2, 1), 1)]);
    }
}
