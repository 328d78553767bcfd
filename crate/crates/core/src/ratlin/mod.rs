//! Exact rational and integer linear algebra.
//!
//! Everything here is exact: rationals are [`BigRational`] values kept in
//! lowest terms, integers are [`BigInt`]. The module provides dense matrices,
//! symmetric quadratic forms with an exact definiteness test, and the
//! Hermite/Smith machinery used for lattice saturation.

mod hnf;
mod json;
mod matrix;
mod quadform;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use hnf::{hnf, integer_kernel, is_saturated, saturate, smith_invariants};
pub use json::{int_vec, int_vecs, parse_rat, rat_str, rat_string, rat_vec};
pub use matrix::{dot, make_primitive, normalize_sign, primitive_integer_vector, IntMatrix, Matrix, RatMatrix};
pub use quadform::{kernel_basis, ldlt_classify, split_off_null, Definiteness, QuadForm};

/// Exact rational number.
pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_to_rat(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Number of coordinates of a symmetric `g x g` matrix.
pub fn sym_dim(g: usize) -> usize {
    g * (g + 1) / 2
}

/// Upper-triangle coordinates `(q11, q12, ..., q1g, q22, ..., qgg)`.
pub fn sym_to_vec<T: Clone + num_traits::Zero>(m: &Matrix<T>) -> Vec<T> {
    let g = m.rows();
    let mut v = Vec::with_capacity(sym_dim(g));
    for i in 0..g {
        for j in i..g {
            v.push(m.get(i, j).clone());
        }
    }
    v
}

/// Inverse of [`sym_to_vec`].
pub fn vec_to_sym<T: Clone + num_traits::Zero>(g: usize, v: &[T]) -> Matrix<T> {
    assert_eq!(v.len(), sym_dim(g));
    let mut m = Matrix::zeros(g, g);
    let mut k = 0;
    for i in 0..g {
        for j in i..g {
            m.set(i, j, v[k].clone());
            m.set(j, i, v[k].clone());
            k += 1;
        }
    }
    m
}

/// Coordinates of the rank one form `x x^T`.
pub fn outer_sym(x: &[BigInt]) -> Vec<BigInt> {
    let g = x.len();
    let mut v = Vec::with_capacity(sym_dim(g));
    for i in 0..g {
        for j in i..g {
            v.push(&x[i] * &x[j]);
        }
    }
    v
}

/// Coefficient vector of the linear functional `Q -> x^T Q x` in
/// upper-triangle coordinates.
pub fn evaluation_functional(x: &[BigInt]) -> Vec<BigInt> {
    let g = x.len();
    let mut v = Vec::with_capacity(sym_dim(g));
    for i in 0..g {
        for j in i..g {
            let p = &x[i] * &x[j];
            v.push(if i == j { p } else { p * 2 });
        }
    }
    v
}

/// `h * m * h^T`.
pub fn congruence(h: &IntMatrix, m: &RatMatrix) -> RatMatrix {
    let hr = h.to_rat();
    hr.mul(m).mul(&hr.transpose())
}
