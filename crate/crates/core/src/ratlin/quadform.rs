use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::hnf::{hnf, saturate};
use super::matrix::{normalize_sign, primitive_integer_vector, IntMatrix, RatMatrix};
use super::{congruence, Rat};
use crate::{Error, Result};

/// Symmetric `g x g` matrix with rational entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RatMatrix", into = "RatMatrix")]
pub struct QuadForm {
    m: RatMatrix,
}

impl TryFrom<RatMatrix> for QuadForm {
    type Error = Error;

    fn try_from(m: RatMatrix) -> Result<Self> {
        QuadForm::new(m)
    }
}

impl From<QuadForm> for RatMatrix {
    fn from(q: QuadForm) -> Self {
        q.m
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.m.fmt(f)
    }
}

impl QuadForm {
    pub fn new(m: RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
        }
        if !m.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(QuadForm { m })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(RatMatrix::from_i64(rows))
    }

    pub fn identity(g: usize) -> Self {
        QuadForm { m: RatMatrix::identity(g) }
    }

    pub fn zero(g: usize) -> Self {
        QuadForm { m: RatMatrix::zeros(g, g) }
    }

    pub fn g(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        self.m.get(i, j)
    }

    /// `Q(x) = x^T Q x`.
    pub fn value(&self, x: &[BigInt]) -> Rat {
        let xr: Vec<Rat> = x.iter().map(|v| Rat::from_integer(v.clone())).collect();
        super::dot(&xr, &self.m.apply(&xr))
    }

    /// Bilinear form `x^T Q y`.
    pub fn bilinear(&self, x: &[Rat], y: &[Rat]) -> Rat {
        super::dot(x, &self.m.apply(y))
    }

    /// `h Q h^T` for an integer matrix `h` (not necessarily square).
    pub fn transform(&self, h: &IntMatrix) -> QuadForm {
        QuadForm { m: congruence(h, &self.m) }
    }

    pub fn classify(&self) -> (usize, Definiteness) {
        ldlt_classify(self)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.classify().1 == Definiteness::PositiveDefinite
    }

    pub fn is_psd(&self) -> bool {
        self.classify().1 != Definiteness::Indefinite
    }

    /// Membership in the rational closure of the positive definite cone.
    /// For rational matrices this is the same as being positive semidefinite,
    /// since the kernel of a rational matrix is spanned by rational vectors.
    pub fn is_rational_closure_member(&self) -> bool {
        self.is_psd()
    }

    /// Leading principal `k x k` block.
    pub fn leading_block(&self, k: usize) -> QuadForm {
        let idx: Vec<usize> = (0..k).collect();
        QuadForm { m: self.m.select_rows(&idx).select_cols(&idx) }
    }

    pub fn determinant(&self) -> Rat {
        self.m.determinant()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

/// Rank and definiteness class by exact symmetric pivoting.
///
/// A positive diagonal entry is used as pivot and eliminated from the
/// remaining block. A negative diagonal entry, or an all-zero diagonal with a
/// nonzero off-diagonal entry, certifies indefiniteness.
pub fn ldlt_classify(q: &QuadForm) -> (usize, Definiteness) {
    let mut a = q.m.clone();
    let mut live: Vec<usize> = (0..q.g()).collect();
    let mut rank = 0;
    loop {
        if live.iter().any(|&i| a.get(i, i).is_negative()) {
            return (q.m.rank(), Definiteness::Indefinite);
        }
        let Some(pos) = live.iter().position(|&i| a.get(i, i).is_positive()) else {
            let offdiag = live.iter().any(|&i| live.iter().any(|&j| !a.get(i, j).is_zero()));
            if offdiag {
                return (q.m.rank(), Definiteness::Indefinite);
            }
            break;
        };
        let p = live.remove(pos);
        let d = a.get(p, p).clone();
        for &i in &live {
            for &j in &live {
                let v = a.get(i, j) - a.get(i, p) * a.get(p, j) / &d;
                a.set(i, j, v);
            }
        }
        rank += 1;
    }
    let kind = if rank == q.g() {
        Definiteness::PositiveDefinite
    } else {
        Definiteness::PositiveSemidefinite
    };
    (rank, kind)
}

/// Basis of the null space of a positive semidefinite form, as primitive
/// integer vectors with positive leading entry.
pub fn kernel_basis(q: &QuadForm) -> Result<Vec<Vec<BigInt>>> {
    if !q.is_psd() {
        return Err(Error::Indefinite);
    }
    Ok(q
        .m
        .nullspace()
        .iter()
        .map(|v| {
            let mut w = primitive_integer_vector(v);
            normalize_sign(&mut w);
            w
        })
        .collect())
}

/// Finds a unimodular `h` with `h q h^T = diag(q', 0)` and `q'` definite.
///
/// The last `g - rank` rows of `h` are the Hermite basis of the saturated
/// kernel lattice. The first rows complete it to a basis of `Z^g`, preferring
/// standard basis vectors.
pub fn split_off_null(q: &QuadForm) -> Result<(IntMatrix, QuadForm)> {
    let kernel = kernel_basis(q)?;
    let g = q.g();
    let k = kernel.len();
    let r = g - k;
    let kernel_rows = if k == 0 {
        IntMatrix::zeros(0, g)
    } else {
        saturate(&IntMatrix::from_rows(kernel, g))
    };
    let complement = standard_complement(&kernel_rows, r).unwrap_or_else(|| hnf_complement(&kernel_rows));
    let mut rows = complement.row_vecs();
    rows.extend(kernel_rows.row_vecs());
    let h = IntMatrix::from_rows(rows, g);
    debug_assert!(h.is_unimodular());
    let full = q.transform(&h);
    Ok((h, full.leading_block(r)))
}

fn standard_complement(kernel: &IntMatrix, r: usize) -> Option<IntMatrix> {
    let g = kernel.cols();
    for choice in combinations(g, r) {
        let mut rows: Vec<Vec<BigInt>> = choice
            .iter()
            .map(|&i| (0..g).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let complement = IntMatrix::from_rows(rows.clone(), g);
        rows.extend(kernel.row_vecs());
        if IntMatrix::from_rows(rows, g).is_unimodular() {
            return Some(complement);
        }
    }
    None
}

// Rows of a unimodular extension of a saturated lattice basis, from the
// transformation of the Hermite form of its transpose.
fn hnf_complement(kernel: &IntMatrix) -> IntMatrix {
    let (_, u) = hnf(&kernel.transpose());
    let inv_t = u.unimodular_inverse().expect("unimodular").transpose();
    let idx: Vec<usize> = (kernel.rows()..kernel.cols()).collect();
    inv_t.select_rows(&idx)
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
