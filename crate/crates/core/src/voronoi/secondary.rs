use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::delone::{affine_dependencies, delone, DeloneSubdivision};
use crate::ratlin::{
    evaluation_functional, int_to_rat, int_vecs, make_primitive, primitive_integer_vector, split_off_null,
    sym_dim, sym_to_vec, vec_to_sym, IntMatrix, QuadForm, Rat, RatMatrix,
};
use crate::stackyfan::dd::{facets_from_rays, rays_from_inequalities};
use crate::stackyfan::{IdealCone, Membership};
use crate::{Error, Result};

/// Closure of the set of forms sharing one Delone subdivision, in
/// upper-triangle coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecondaryCone {
    pub sample: QuadForm,
    #[serde(with = "int_vecs")]
    pub rays: Vec<Vec<BigInt>>,
    /// Flatness of the cells: `e . q = 0`.
    #[serde(with = "int_vecs")]
    pub equalities: Vec<Vec<BigInt>>,
    /// Convexity across facets: `r . q >= 0`, positive on the sample.
    #[serde(with = "int_vecs")]
    pub regulators: Vec<Vec<BigInt>>,
    #[serde(skip)]
    cone: IdealCone,
}

impl SecondaryCone {
    pub fn cone(&self) -> &IdealCone {
        &self.cone
    }

    /// `q` lies in the closed cone.
    pub fn contains(&self, q: &QuadForm) -> bool {
        q.g() == self.sample.g() && self.cone.contains(&sym_to_vec(q.matrix()))
    }

    /// `q` lies in the relative interior.
    pub fn in_relative_interior(&self, q: &QuadForm) -> bool {
        q.g() == self.sample.g()
            && self.cone.membership(&sym_to_vec(q.matrix())).is_ok_and(|m| m == Membership::Interior)
    }

    fn from_rays(sample: QuadForm, rays: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = sym_dim(sample.g());
        let cone = IdealCone::new(n, &rays, &[])?;
        let (equalities, regulators) = facets_from_rays(n, cone.rays()).expect("pointed");
        Ok(SecondaryCone { sample, rays: cone.rays().to_vec(), equalities, regulators, cone })
    }
}

/// Value of the linear functional `a` on `q` in upper-triangle coordinates.
pub fn functional_value(a: &[BigInt], q: &QuadForm) -> Rat {
    a.iter().zip(sym_to_vec(q.matrix())).map(|(x, y)| int_to_rat(x) * y).sum()
}

// Selects `g + 1` affinely independent points.
fn affine_basis(points: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let d = points[0].len() + 1;
    let mut chosen: Vec<Vec<BigInt>> = Vec::new();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for p in points {
        let mut row = vec![Rat::from_integer(1.into())];
        row.extend(p.iter().map(int_to_rat));
        rows.push(row);
        if RatMatrix::from_rows(rows.clone(), d).rank() == rows.len() {
            chosen.push(p.clone());
        } else {
            rows.pop();
        }
        if chosen.len() == d {
            break;
        }
    }
    chosen
}

/// Secondary cone of a Delone subdivision: flatness equalities for every
/// cell and one regulator per facet, comparing the apex across the facet
/// with the affine interpolation from the cell.
pub fn secondary_cone(d: &DeloneSubdivision) -> Result<SecondaryCone> {
    let g = d.g();
    let n = sym_dim(g);
    let mut equalities = Vec::new();
    for cell in &d.cells {
        for lambda in affine_dependencies(&cell.vertices) {
            let mut e = vec![BigInt::zero(); n];
            for (l, v) in lambda.iter().zip(&cell.vertices) {
                for (x, y) in e.iter_mut().zip(evaluation_functional(v)) {
                    *x += l * y;
                }
            }
            let e = make_primitive(&e);
            if e.iter().any(|x| !x.is_zero()) && !equalities.contains(&e) {
                equalities.push(e);
            }
        }
    }
    let mut regulators = Vec::new();
    for f in &d.facets {
        let basis = affine_basis(&d.cells[f.cell].vertices);
        let cols: Vec<Vec<Rat>> = basis
            .iter()
            .map(|p| std::iter::once(Rat::from_integer(1.into())).chain(p.iter().map(int_to_rat)).collect())
            .collect();
        let mut target = vec![Rat::from_integer(1.into())];
        target.extend(f.apex.iter().map(int_to_rat));
        let mu = RatMatrix::from_rows(cols, g + 1).transpose().solve(&target).expect("affine basis");
        let mut r: Vec<Rat> = evaluation_functional(&f.apex).iter().map(int_to_rat).collect();
        for (m, p) in mu.iter().zip(&basis) {
            for (x, y) in r.iter_mut().zip(evaluation_functional(p)) {
                *x -= m * int_to_rat(&y);
            }
        }
        let mut r = primitive_integer_vector(&r);
        let s = functional_value(&r, &d.form);
        if s.is_zero() {
            continue;
        }
        if s.is_negative() {
            r.iter_mut().for_each(|x| *x = -x.clone());
        }
        if !regulators.contains(&r) {
            regulators.push(r);
        }
    }
    equalities.sort();
    regulators.sort();
    let rays = rays_from_inequalities(n, &regulators, &equalities)
        .ok_or_else(|| Error::Unsupported("secondary cone contains a line".into()))?;
    let cone = IdealCone::new(n, &rays, &[])?;
    Ok(SecondaryCone { sample: d.form.clone(), rays: cone.rays().to_vec(), equalities, regulators, cone })
}

/// `h M h^T` applied to each ray, in upper-triangle coordinates.
pub fn transform_rays(g: usize, h: &IntMatrix, rays: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    rays.iter()
        .map(|r| {
            let m = vec_to_sym(g, r);
            make_primitive(&sym_to_vec(&h.mul(&m).mul(&h.transpose())))
        })
        .collect()
}

/// The cone `h sigma h^T`.
pub fn transform_cone(g: usize, h: &IntMatrix, c: &IdealCone) -> Result<IdealCone> {
    IdealCone::new(c.ambient_dim(), &transform_rays(g, h, c.rays()), &[])
}

/// Secondary cone of a positive semidefinite form. Definite forms go
/// through [`delone`]; otherwise the cone of the definite block is embedded
/// back through the splitting of the null block.
pub fn secondary_cone_of_form(q: &QuadForm) -> Result<SecondaryCone> {
    if q.is_positive_definite() {
        return secondary_cone(&delone(q)?);
    }
    let (h, block) = split_off_null(q)?;
    let g = q.g();
    let r = block.g();
    if r == 0 {
        return SecondaryCone::from_rays(q.clone(), Vec::new());
    }
    let inner = secondary_cone(&delone(&block)?)?;
    let hinv = h.unimodular_inverse().expect("unimodular");
    let rays = inner
        .rays
        .iter()
        .map(|ray| {
            let small = vec_to_sym(r, ray);
            let mut big = IntMatrix::zeros(g, g);
            for i in 0..r {
                for j in 0..r {
                    big.set(i, j, small.get(i, j).clone());
                }
            }
            make_primitive(&sym_to_vec(&hinv.mul(&big).mul(&hinv.transpose())))
        })
        .collect();
    SecondaryCone::from_rays(q.clone(), rays)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::big;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| big(x)).collect()
    }

    fn cone(rays: &[&[i64]]) -> IdealCone {
        IdealCone::new(3, &rays.iter().map(|r| v(r)).collect::<Vec<_>>(), &[]).unwrap()
    }

    #[test]
    fn genus_two_table() {
        let a2 = QuadForm::from_i64(&[vec![2, -1], vec![-1, 2]]).unwrap();
        let d1 = secondary_cone(&delone(&a2).unwrap()).unwrap();
        assert!(d1.cone().same_cone(&cone(&[&[1, -1, 1], &[1, 0, 0], &[0, 0, 1]])));
        assert!(d1.in_relative_interior(&a2));
        assert!(d1.equalities.is_empty());

        let d2 = secondary_cone(&delone(&QuadForm::identity(2)).unwrap()).unwrap();
        assert!(d2.cone().same_cone(&cone(&[&[1, 0, 0], &[0, 0, 1]])));
        assert_eq!(d2.equalities, vec![v(&[0, 1, 0])]);
        assert!(d2.in_relative_interior(&QuadForm::identity(2)));
    }

    #[test]
    fn boundary_limit_through_the_null_block() {
        let q = QuadForm::from_i64(&[vec![1, 0], vec![0, 0]]).unwrap();
        let d3 = secondary_cone_of_form(&q).unwrap();
        assert_eq!(d3.rays, vec![v(&[1, 0, 0])]);
        let z = secondary_cone_of_form(&QuadForm::zero(2)).unwrap();
        assert!(z.rays.is_empty());
    }

    #[test]
    fn translated_cone_contains_the_translated_sample() {
        let a2 = QuadForm::from_i64(&[vec![2, 1], vec![1, 2]]).unwrap();
        let sc = secondary_cone_of_form(&a2).unwrap();
        assert!(sc.in_relative_interior(&a2));
        let flip = IntMatrix::from_i64(&[vec![1, 0], vec![0, -1]]);
        let back = transform_cone(2, &flip, sc.cone()).unwrap();
        assert!(back.same_cone(&cone(&[&[1, -1, 1], &[1, 0, 0], &[0, 0, 1]])));
    }
}
