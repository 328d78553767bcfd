//! Finite-slice checks of the axioms of an admissible decomposition.

use serde::Serialize;

use super::secondary::transform_cone;
use crate::ratlin::{IntMatrix, Rat};
use crate::stackyfan::dd::rays_from_inequalities;
use crate::stackyfan::{Face, IdealCone};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityRecord {
    pub cone: usize,
    pub generator: usize,
    /// Slice index of `h sigma h^T`, or `None` when it leaves the slice.
    pub target: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibleReport {
    /// Faces (cone index, rays) not present in the slice.
    pub missing_faces: Vec<(usize, Face)>,
    /// Pairs whose intersection is not a face of both.
    pub bad_intersections: Vec<(usize, usize)>,
    pub stability: Vec<StabilityRecord>,
    /// Finiteness modulo the group and local finiteness are global
    /// statements; a finite slice cannot decide them.
    pub out_of_scope: Vec<String>,
}

impl AdmissibleReport {
    pub fn face_closed(&self) -> bool {
        self.missing_faces.is_empty()
    }

    pub fn intersections_are_faces(&self) -> bool {
        self.bad_intersections.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.face_closed() && self.intersections_are_faces()
    }

    /// Records where a generator maps a cone outside the slice.
    pub fn leaving(&self) -> Vec<&StabilityRecord> {
        self.stability.iter().filter(|r| r.target.is_none()).collect()
    }
}

fn find(slice: &[IdealCone], c: &IdealCone) -> Option<usize> {
    slice.iter().position(|s| s.same_cone(c))
}

fn intersection(a: &IdealCone, b: &IdealCone) -> Option<IdealCone> {
    let n = a.ambient_dim();
    let ineqs: Vec<_> = a.facets().iter().chain(b.facets()).cloned().collect();
    let eqs: Vec<_> = a.equalities().iter().chain(b.equalities()).cloned().collect();
    let rays = rays_from_inequalities(n, &ineqs, &eqs)?;
    IdealCone::new(n, &rays, &[]).ok()
}

fn is_face_of(c: &IdealCone, of: &IdealCone) -> bool {
    let n = of.ambient_dim();
    let mut x = vec![Rat::from_integer(0.into()); n];
    for r in c.rays() {
        for (xi, ri) in x.iter_mut().zip(r) {
            *xi += Rat::from_integer(ri.clone());
        }
    }
    match of.carrier(&x) {
        Some(face) => of.face_cone(&face).same_cone(c),
        None => false,
    }
}

/// Checks face closure, that pairwise intersections are faces of both
/// cones, and where each generator `h` sends each cone under
/// `sigma -> h sigma h^T`.
pub fn check_admissible_axioms(g: usize, slice: &[IdealCone], generators: &[IntMatrix]) -> Result<AdmissibleReport> {
    let mut missing_faces = Vec::new();
    for (i, c) in slice.iter().enumerate() {
        for f in c.faces() {
            if !f.is_empty() && find(slice, &c.face_cone(f)).is_none() {
                missing_faces.push((i, f.clone()));
            }
        }
    }
    let mut bad_intersections = Vec::new();
    for i in 0..slice.len() {
        for j in i + 1..slice.len() {
            let ok = match intersection(&slice[i], &slice[j]) {
                Some(c) => is_face_of(&c, &slice[i]) && is_face_of(&c, &slice[j]),
                None => false,
            };
            if !ok {
                bad_intersections.push((i, j));
            }
        }
    }
    let mut stability = Vec::new();
    for (i, c) in slice.iter().enumerate() {
        for (k, h) in generators.iter().enumerate() {
            let image = transform_cone(g, h, c)?;
            stability.push(StabilityRecord { cone: i, generator: k, target: find(slice, &image) });
        }
    }
    Ok(AdmissibleReport {
        missing_faces,
        bad_intersections,
        stability,
        out_of_scope: vec!["finitely many cones modulo GL_g(Z)".into(), "local finiteness".into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::big;

    fn cone(rays: &[&[i64]]) -> IdealCone {
        let gens: Vec<_> = rays.iter().map(|r| r.iter().map(|&x| big(x)).collect()).collect();
        IdealCone::new(3, &gens, &[]).unwrap()
    }

    fn principal_slice() -> Vec<IdealCone> {
        let top = cone(&[&[1, -1, 1], &[1, 0, 0], &[0, 0, 1]]);
        top.faces().iter().filter(|f| !f.is_empty()).map(|f| top.face_cone(f)).collect()
    }

    #[test]
    fn principal_cone_with_its_faces() {
        let slice = principal_slice();
        assert_eq!(slice.len(), 7);
        let s = IntMatrix::from_i64(&[vec![0, -1], vec![1, 0]]);
        let t = IntMatrix::from_i64(&[vec![1, 1], vec![0, 1]]);
        let r = check_admissible_axioms(2, &slice, &[s, t]).unwrap();
        assert!(r.passed());
        // S permutes the three rays of the principal cone up to sign.
        let top = slice.len() - 1;
        let st = r.stability.iter().find(|x| x.cone == top && x.generator == 0).unwrap();
        assert_eq!(st.target, None);
        assert!(r.stability.iter().any(|x| x.target.is_some()));
    }

    #[test]
    fn missing_face_is_reported() {
        let mut slice = principal_slice();
        slice.remove(0);
        let r = check_admissible_axioms(2, &slice, &[]).unwrap();
        assert!(!r.face_closed());
    }

    #[test]
    fn neighbours_share_a_ray() {
        let a = cone(&[&[1, -1, 1], &[1, 0, 0], &[0, 0, 1]]);
        let b = cone(&[&[1, 1, 1], &[1, 0, 0], &[0, 0, 1]]);
        let ray = cone(&[&[1, 0, 0]]);
        let r = check_admissible_axioms(2, &[a.clone(), b.clone(), ray], &[]).unwrap();
        assert!(r.intersections_are_faces());
        let bad = cone(&[&[1, 0, 0], &[1, 1, 1], &[1, -1, 1]]);
        let r = check_admissible_axioms(2, &[a, bad], &[]).unwrap();
        assert!(!r.intersections_are_faces());
    }
}
