use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::period::period_on_cell;
use crate::markings::Marking;
use crate::moduli::{cell_label, enumerate_stable};
use crate::ratlin::{int_to_rat, int_vecs, primitive_integer_vector, sym_dim, sym_to_vec, QuadForm, Rat};
use crate::stackyfan::IdealCone;
use crate::voronoi::{reduce_binary, secondary_cone_of_form, transform_cone};
use crate::{Error, Result};

/// Admissible decomposition of the cone of positive semidefinite forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sigma {
    /// Second Voronoi decomposition into secondary cones.
    V,
    /// Perfect cone decomposition (genus two only here).
    P,
}

/// Outcome of a compatibility check for one marked cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatReport {
    pub sigma: Sigma,
    /// Image of the barycentre of the cell.
    pub sample: QuadForm,
    #[serde(with = "int_vecs")]
    pub generators: Vec<Vec<BigInt>>,
    /// Rays of the cone of the decomposition carrying the sample.
    #[serde(with = "int_vecs")]
    pub witness: Vec<Vec<BigInt>>,
    /// Generators outside the witness cone.
    pub failures: Vec<usize>,
}

impl CompatReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const PRINCIPAL: [[i64; 3]; 3] = [[1, -1, 1], [1, 0, 0], [0, 0, 1]];

/// Smallest cone of the genus two perfect cone decomposition containing the
/// psd form `q`.
pub fn perfect_cell_g2(q: &QuadForm) -> Result<IdealCone> {
    if q.g() != 2 {
        return Err(Error::Unsupported("perfect cone location beyond genus two".into()));
    }
    if !q.is_psd() {
        return Err(Error::Indefinite);
    }
    let x = sym_to_vec(q.matrix());
    if q.is_positive_definite() {
        let (h, _) = reduce_binary(q)?;
        let hinv = h.unimodular_inverse().expect("unimodular");
        let gens: Vec<Vec<BigInt>> = PRINCIPAL.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect();
        let cone = transform_cone(2, &hinv, &IdealCone::new(3, &gens, &[])?)?;
        let face = cone.carrier(&x).expect("the reduced form lies in the principal cone");
        return Ok(cone.face_cone(&face));
    }
    if x.iter().all(Zero::is_zero) {
        return IdealCone::new(3, &[], &[]);
    }
    // Rank one: a multiple of x x^T with x primitive.
    IdealCone::new(3, &[primitive_integer_vector(&x)], &[])
}

/// Checks that the period image of the cell of `m` lies in a single cone of
/// the decomposition, namely the one carrying the image of the barycentre.
pub fn compat_check(m: &Marking, sigma: Sigma) -> Result<CompatReport> {
    let g = m.genus();
    match sigma {
        Sigma::V if g > 3 => return Err(Error::Unsupported(format!("second Voronoi check at genus {g}"))),
        Sigma::P if g != 2 => return Err(Error::Unsupported(format!("perfect cone check at genus {g}"))),
        _ => {}
    }
    let p = period_on_cell(m);
    let ones = vec![Rat::from_integer(1.into()); p.num_edges()];
    let sample = p.evaluate(&ones)?;
    let witness = match sigma {
        Sigma::V => secondary_cone_of_form(&sample)?.cone().clone(),
        Sigma::P => perfect_cell_g2(&sample)?,
    };
    let generators = p.image_generators();
    let failures = generators
        .iter()
        .enumerate()
        .filter(|(_, gen)| !witness.contains(&gen.iter().map(int_to_rat).collect::<Vec<_>>()))
        .map(|(i, _)| i)
        .collect();
    debug_assert_eq!(witness.ambient_dim(), sym_dim(g));
    Ok(CompatReport { sigma, sample, generators, witness: witness.rays().to_vec(), failures })
}

/// One catalogue cell with its compatibility report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellCompat {
    pub cell: usize,
    pub label: String,
    pub report: CompatReport,
}

/// Runs [`compat_check`] on the standard marking of every stable graph of
/// genus `g`, in catalogue order. Other markings of a cell differ by the
/// `GL_g(Z)` action, which permutes the cones of both decompositions.
pub fn compat_check_genus(g: usize, sigma: Sigma) -> Result<Vec<CellCompat>> {
    let graphs = enumerate_stable(g)?;
    graphs
        .par_iter()
        .enumerate()
        .map(|(cell, gr)| {
            let report = compat_check(&Marking::standard(gr), sigma)?;
            Ok(CellCompat { cell, label: cell_label(gr), report })
        })
        .collect()
}
