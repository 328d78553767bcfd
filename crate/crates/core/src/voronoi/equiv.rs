use num_bigint::BigInt;

use super::minvec::{min_vectors, short_vectors};
use crate::ratlin::{int_to_rat, IntMatrix, QuadForm, Rat};
use crate::{Error, Result};

fn bilinear(q: &QuadForm, x: &[BigInt], y: &[BigInt]) -> Rat {
    let xr: Vec<Rat> = x.iter().map(int_to_rat).collect();
    let yr: Vec<Rat> = y.iter().map(int_to_rat).collect();
    q.bilinear(&xr, &yr)
}

/// Finds `h` in `GL_g(Z)` with `h q1 h^T = q2`, or `None`.
///
/// Row `i` of `h` must satisfy `q1(h_i) = q2_ii`, so it is drawn from the
/// finite set of such vectors; rows are chosen one at a time with the
/// off-diagonal entries checked as they become available.
pub fn gl_equivalent(q1: &QuadForm, q2: &QuadForm) -> Result<Option<IntMatrix>> {
    if q1.g() != q2.g() {
        return Err(Error::DimensionMismatch { expected: q1.g(), found: q2.g() });
    }
    if !q1.is_positive_definite() || !q2.is_positive_definite() {
        return Err(Error::NotDefinite);
    }
    let g = q1.g();
    if g == 0 {
        return Ok(Some(IntMatrix::identity(0)));
    }
    if q1.determinant() != q2.determinant() {
        return Ok(None);
    }
    let (m1, m2) = (min_vectors(q1)?, min_vectors(q2)?);
    if m1.mu != m2.mu || m1.vectors.len() != m2.vectors.len() {
        return Ok(None);
    }
    let mut candidates = Vec::with_capacity(g);
    for i in 0..g {
        let target = q2.get(i, i);
        let mut c: Vec<Vec<BigInt>> =
            short_vectors(q1, target)?.into_iter().filter(|x| &q1.value(x) == target).collect();
        c.reverse();
        candidates.push(c);
    }
    fn rec(i: usize, q1: &QuadForm, q2: &QuadForm, cands: &[Vec<Vec<BigInt>>], rows: &mut Vec<Vec<BigInt>>) -> bool {
        let g = q1.g();
        if i == g {
            return IntMatrix::from_rows(rows.clone(), g).is_unimodular();
        }
        for x in &cands[i] {
            if (0..i).all(|j| &bilinear(q1, &rows[j], x) == q2.get(j, i)) {
                rows.push(x.clone());
                if rec(i + 1, q1, q2, cands, rows) {
                    return true;
                }
                rows.pop();
            }
        }
        false
    }
    let mut rows = Vec::with_capacity(g);
    Ok(rec(0, q1, q2, &candidates, &mut rows).then(|| IntMatrix::from_rows(rows, g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_flip_witness() {
        let a = QuadForm::from_i64(&[vec![2, 1], vec![1, 2]]).unwrap();
        let b = QuadForm::from_i64(&[vec![2, -1], vec![-1, 2]]).unwrap();
        let h = gl_equivalent(&a, &b).unwrap().unwrap();
        assert_eq!(h, IntMatrix::from_i64(&[vec![1, 0], vec![0, -1]]));
    }

    #[test]
    fn invariant_mismatch() {
        let id = QuadForm::identity(2);
        let d = QuadForm::from_i64(&[vec![1, 0], vec![0, 2]]).unwrap();
        assert_eq!(gl_equivalent(&id, &d).unwrap(), None);
        let a2 = QuadForm::from_i64(&[vec![2, 1], vec![1, 2]]).unwrap();
        let other = QuadForm::from_i64(&[vec![1, 0], vec![0, 3]]).unwrap();
        assert_eq!(gl_equivalent(&a2, &other).unwrap(), None);
    }

    #[test]
    fn planted_conjugate() {
        let q = QuadForm::from_i64(&[vec![3, 1, 0], vec![1, 2, -1], vec![0, -1, 4]]).unwrap();
        let h = IntMatrix::from_i64(&[vec![1, 2, 0], vec![0, 1, -1], vec![1, 2, 1]]);
        assert!(h.is_unimodular());
        let p = q.transform(&h);
        let w = gl_equivalent(&q, &p).unwrap().unwrap();
        assert_eq!(q.transform(&w), p);
    }
}
