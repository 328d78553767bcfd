use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::graphs::{cycle_basis, WeightedGraph};
use crate::markings::Marking;
use crate::ratlin::{IntMatrix, QuadForm, Rat, RatMatrix};
use crate::{Error, Result};

/// Tropical Jacobian as a quadratic form on `H1(Γ) ⊕ Z^|w|`: the cycle
/// block first, then a zero block for the weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalJacobian {
    pub genus: usize,
    pub block_form: QuadForm,
    /// Rank of the form: the first Betti number of the graph.
    pub rank: usize,
}

pub(crate) fn check_lengths(g: &WeightedGraph, lengths: &[Rat]) -> Result<()> {
    if lengths.len() != g.num_edges() {
        return Err(Error::DimensionMismatch { expected: g.num_edges(), found: lengths.len() });
    }
    if let Some(e) = lengths.iter().position(|l| !l.is_positive()) {
        return Err(Error::NonPositiveLength(e));
    }
    Ok(())
}

/// `B diag(l) B^T` for an integer `B` with one column per edge.
pub(crate) fn weighted_gram(b: &IntMatrix, lengths: &[Rat], size: usize) -> QuadForm {
    let mut m = RatMatrix::zeros(size, size);
    for i in 0..b.rows() {
        for j in 0..b.rows() {
            let mut s = Rat::zero();
            for (e, l) in lengths.iter().enumerate() {
                let p = b.get(i, e) * b.get(j, e);
                if !p.is_zero() {
                    s += Rat::from_integer(p) * l;
                }
            }
            m.set(i, j, s);
        }
    }
    QuadForm::new(m).expect("Gram matrices are symmetric")
}

/// Gram matrix of the fundamental cycle basis under the edge-length inner
/// product, padded with zeros for the vertex weights.
pub fn jacobian(g: &WeightedGraph, lengths: &[Rat]) -> Result<TropicalJacobian> {
    g.check_stable()?;
    check_lengths(g, lengths)?;
    let c = cycle_basis(g);
    Ok(TropicalJacobian { genus: g.genus(), block_form: weighted_gram(&c, lengths, g.genus()), rank: c.rows() })
}

/// Period matrix of a marked tropical curve: `B diag(l) B^T`, with `B` the
/// petals abelianized into edge coordinates.
pub fn marked_period(g: &WeightedGraph, m: &Marking, lengths: &[Rat]) -> Result<QuadForm> {
    if m.base() != g {
        return Err(Error::GraphMismatch);
    }
    check_lengths(g, lengths)?;
    Ok(weighted_gram(&m.edge_matrix(), lengths, m.genus()))
}
