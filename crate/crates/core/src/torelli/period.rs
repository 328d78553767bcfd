use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::markings::Marking;
use crate::ratlin::{int_to_rat, int_vecs, sym_dim, vec_to_sym, IntMatrix, QuadForm, Rat};
use crate::{Error, Result};

/// The period map of one marked cell as an integral linear map from edge
/// lengths to symmetric matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodMatrixMap {
    pub genus: usize,
    /// Petals abelianized into edge coordinates, `g x |E|`.
    pub b: IntMatrix,
    /// Column `e` is `B E_e B^T` in upper-triangle coordinates.
    #[serde(with = "int_vecs")]
    pub columns: Vec<Vec<BigInt>>,
}

impl PeriodMatrixMap {
    pub fn num_edges(&self) -> usize {
        self.columns.len()
    }

    /// The map as a `g(g+1)/2 x |E|` integer matrix.
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.columns.clone(), sym_dim(self.genus)).transpose()
    }

    /// Evaluates at nonnegative lengths; zero lengths give face points.
    pub fn evaluate(&self, lengths: &[Rat]) -> Result<QuadForm> {
        if lengths.len() != self.num_edges() {
            return Err(Error::DimensionMismatch { expected: self.num_edges(), found: lengths.len() });
        }
        let mut v = vec![Rat::zero(); sym_dim(self.genus)];
        for (col, l) in self.columns.iter().zip(lengths) {
            for (x, c) in v.iter_mut().zip(col) {
                *x += int_to_rat(c) * l;
            }
        }
        QuadForm::new(vec_to_sym(self.genus, &v))
    }

    /// Nonzero columns: the rays spanning the image cone.
    pub fn image_generators(&self) -> Vec<Vec<BigInt>> {
        let mut out: Vec<Vec<BigInt>> = self.columns.iter().filter(|c| c.iter().any(|x| !x.is_zero())).cloned().collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Linearization of the marked period map on the cell of `m`.
pub fn period_on_cell(m: &Marking) -> PeriodMatrixMap {
    let b = m.edge_matrix();
    let g = m.genus();
    let columns = (0..b.cols())
        .map(|e| {
            let x = b.column(e);
            let mut v = Vec::with_capacity(sym_dim(g));
            for i in 0..g {
                for j in i..g {
                    v.push(&x[i] * &x[j]);
                }
            }
            v
        })
        .collect();
    PeriodMatrixMap { genus: g, b, columns }
}
