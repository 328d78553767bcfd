use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dd::facets_from_rays;
use crate::ratlin::{dot, make_primitive, IntMatrix, Rat};
use crate::{Error, Result};

/// A face, identified by the sorted indices of the rays it contains.
pub type Face = Vec<usize>;

/// Rational polyhedral pointed cone with some faces removed.
///
/// Rays are primitive, pairwise distinct and extreme. The removed faces form
/// a downward closed family: a face contained in a removed face is removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealCone {
    ambient_dim: usize,
    rays: Vec<Vec<BigInt>>,
    equalities: Vec<Vec<BigInt>>,
    facets: Vec<Vec<BigInt>>,
    faces: Vec<Face>,
    removed: BTreeSet<Face>,
}

/// Position of a point relative to an ideal cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Membership {
    /// In the relative interior of the whole cone.
    Interior,
    /// In the relative interior of a proper retained face.
    RetainedFace { rays: Face },
    /// In the relative interior of a removed face.
    Removed { rays: Face },
    Outside,
}

impl IdealCone {
    /// Normalizes generators to primitive vectors, drops duplicates and
    /// non-extreme generators, and computes the face lattice. `removed` lists
    /// faces by generator indices (of the input list); every face contained
    /// in a listed one is removed too.
    pub fn new(ambient_dim: usize, generators: &[Vec<BigInt>], removed: &[Vec<usize>]) -> Result<Self> {
        let mut prim = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.len() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, found: g.len() });
            }
            if g.iter().all(Zero::is_zero) {
                return Err(Error::ZeroGenerator(i));
            }
            prim.push(make_primitive(g));
        }
        let mut distinct: Vec<Vec<BigInt>> = Vec::new();
        for p in &prim {
            if !distinct.contains(p) {
                distinct.push(p.clone());
            }
        }
        let (equalities, facets) =
            facets_from_rays(ambient_dim, &distinct).ok_or_else(|| Error::Unsupported("cone contains a line".into()))?;
        let rays: Vec<Vec<BigInt>> = distinct
            .iter()
            .filter(|r| is_extreme(r, &distinct, &facets))
            .cloned()
            .collect();
        let mut cone = IdealCone {
            ambient_dim,
            faces: Vec::new(),
            removed: BTreeSet::new(),
            rays,
            equalities,
            facets,
        };
        cone.faces = cone.compute_faces();
        let mut removed_faces = BTreeSet::new();
        for face in removed {
            let mut idx = BTreeSet::new();
            for &g in face {
                if g >= prim.len() {
                    return Err(Error::Parse(format!("removed face refers to generator {g}")));
                }
                if let Some(i) = cone.rays.iter().position(|r| *r == prim[g]) {
                    idx.insert(i);
                }
            }
            let target = cone.face_closure(&idx.into_iter().collect::<Vec<_>>());
            removed_faces.insert(target);
        }
        cone.removed = cone.downward_closure(&removed_faces);
        Ok(cone)
    }

    /// The orthant spanned by the standard basis of `R^n`.
    pub fn orthant(n: usize, removed: &[Vec<usize>]) -> Result<Self> {
        IdealCone::new(n, &IntMatrix::identity(n).row_vecs(), removed)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn facets(&self) -> &[Vec<BigInt>] {
        &self.facets
    }

    pub fn equalities(&self) -> &[Vec<BigInt>] {
        &self.equalities
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim - self.equalities.len()
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim()
    }

    /// All faces, the origin (empty ray set) included, sorted by size then
    /// lexicographically.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn removed_faces(&self) -> &BTreeSet<Face> {
        &self.removed
    }

    pub fn is_removed(&self, face: &[usize]) -> bool {
        self.removed.contains(face)
    }

    pub fn retained_faces(&self) -> Vec<Face> {
        self.faces.iter().filter(|f| !self.removed.contains(*f)).cloned().collect()
    }

    pub fn full_face(&self) -> Face {
        (0..self.rays.len()).collect()
    }

    pub fn is_face(&self, rays: &[usize]) -> bool {
        self.faces.iter().any(|f| f == rays)
    }

    pub fn face_dim(&self, face: &[usize]) -> usize {
        if face.is_empty() {
            return 0;
        }
        let rows: Vec<Vec<BigInt>> = face.iter().map(|&i| self.rays[i].clone()).collect();
        IntMatrix::from_rows(rows, self.ambient_dim).to_rat().rank()
    }

    fn rays_on(&self, normal: &[BigInt]) -> BTreeSet<usize> {
        (0..self.rays.len()).filter(|&i| dot(normal, &self.rays[i]).is_zero()).collect()
    }

    fn compute_faces(&self) -> Vec<Face> {
        let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let full: BTreeSet<usize> = (0..self.rays.len()).collect();
        faces.insert(full.clone());
        let facet_sets: Vec<BTreeSet<usize>> = self.facets.iter().map(|f| self.rays_on(f)).collect();
        let mut frontier = vec![full];
        while let Some(f) = frontier.pop() {
            for s in &facet_sets {
                let g: BTreeSet<usize> = f.intersection(s).copied().collect();
                if faces.insert(g.clone()) {
                    frontier.push(g);
                }
            }
        }
        faces.insert(BTreeSet::new());
        let mut out: Vec<Face> = faces.into_iter().map(|s| s.into_iter().collect()).collect();
        out.sort_by(|a: &Face, b: &Face| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    /// Smallest face containing the given rays.
    pub fn face_closure(&self, rays: &[usize]) -> Face {
        self.faces
            .iter()
            .filter(|f| rays.iter().all(|r| f.contains(r)))
            .min_by_key(|f| f.len())
            .cloned()
            .expect("the full cone contains every ray")
    }

    fn downward_closure(&self, removed: &BTreeSet<Face>) -> BTreeSet<Face> {
        self.faces
            .iter()
            .filter(|f| removed.iter().any(|r| f.iter().all(|x| r.contains(x))))
            .cloned()
            .collect()
    }

    /// Minimal face containing `x` in its relative interior, if `x` lies in
    /// the closed cone.
    pub fn carrier(&self, x: &[Rat]) -> Option<Face> {
        let xr = |v: &[BigInt]| -> Rat { v.iter().zip(x).map(|(a, b)| Rat::from_integer(a.clone()) * b).sum() };
        if self.equalities.iter().any(|e| !xr(e).is_zero()) {
            return None;
        }
        let mut face: BTreeSet<usize> = (0..self.rays.len()).collect();
        for f in &self.facets {
            let v = xr(f);
            if v.is_negative() {
                return None;
            }
            if v.is_zero() {
                let on = self.rays_on(f);
                face = face.intersection(&on).copied().collect();
            }
        }
        Some(face.into_iter().collect())
    }

    pub fn membership(&self, x: &[Rat]) -> Result<Membership> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: x.len() });
        }
        Ok(match self.carrier(x) {
            None => Membership::Outside,
            Some(f) if self.removed.contains(&f) => Membership::Removed { rays: f },
            Some(f) if f.len() == self.rays.len() => Membership::Interior,
            Some(f) => Membership::RetainedFace { rays: f },
        })
    }

    /// True when `x` lies in the closed cone.
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.carrier(x).is_some()
    }

    /// Same cone as a set, regardless of ray order.
    pub fn same_cone(&self, other: &IdealCone) -> bool {
        let a: BTreeSet<_> = self.rays.iter().collect();
        let b: BTreeSet<_> = other.rays.iter().collect();
        self.ambient_dim == other.ambient_dim && a == b
    }

    /// Rays as a matrix with one row per ray.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.rays.clone(), self.ambient_dim)
    }

    /// The same closed cone with only the given face retained as a cone
    /// of its own (all removals dropped).
    pub fn face_cone(&self, face: &[usize]) -> IdealCone {
        let gens: Vec<Vec<BigInt>> = face.iter().map(|&i| self.rays[i].clone()).collect();
        IdealCone::new(self.ambient_dim, &gens, &[]).expect("faces are pointed cones")
    }
}

// A generator is extreme iff no other generator lies on every facet through it.
fn is_extreme(r: &[BigInt], all: &[Vec<BigInt>], facets: &[Vec<BigInt>]) -> bool {
    let on: Vec<&Vec<BigInt>> = facets.iter().filter(|f| dot(f, r).is_zero()).collect();
    all.iter()
        .filter(|s| s.as_slice() != r)
        .all(|s| !on.iter().all(|f| dot(f, s).is_zero()))
}
