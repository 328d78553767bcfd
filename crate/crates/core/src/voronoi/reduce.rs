use num_traits::{Signed, Zero};

use crate::ratlin::{IntMatrix, QuadForm};
use crate::{Error, Result};

/// True when `q12 <= 0`, `q11 + q12 >= 0` and `q22 + q12 >= 0`: the closed
/// principal cone spanned by `R12`, `R13`, `R23`.
pub fn in_principal_cone(q: &QuadForm) -> bool {
    let (a, b, c) = (q.get(0, 0), q.get(0, 1), q.get(1, 1));
    q.g() == 2 && !b.is_positive() && !(a + b).is_negative() && !(c + b).is_negative()
}

/// Reduces a binary definite form into the closed principal cone. Returns
/// `(h, h q h^T)`.
///
/// Descent: make `q12 <= 0` by a sign flip, then add one basis vector to the
/// other while that lowers the trace.
pub fn reduce_binary(q: &QuadForm) -> Result<(IntMatrix, QuadForm)> {
    if q.g() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: q.g() });
    }
    if !q.is_positive_definite() {
        return Err(Error::NotDefinite);
    }
    let flip = IntMatrix::from_i64(&[vec![1, 0], vec![0, -1]]);
    let low = IntMatrix::from_i64(&[vec![1, 0], vec![1, 1]]);
    let up = IntMatrix::from_i64(&[vec![1, 1], vec![0, 1]]);
    let mut h = IntMatrix::identity(2);
    let mut cur = q.clone();
    loop {
        let step = if cur.get(0, 1).is_positive() {
            &flip
        } else if (cur.get(0, 0) + cur.get(0, 1)).is_negative() {
            &low
        } else if (cur.get(1, 1) + cur.get(0, 1)).is_negative() {
            &up
        } else {
            break;
        };
        h = step.mul(&h);
        cur = cur.transform(step);
    }
    debug_assert!(!cur.get(0, 0).is_zero());
    Ok((h, cur))
}

/// Canonical representative of the `GL_2(Z)`-class of a binary definite
/// form, with `h` such that `h q h^T` is that representative.
///
/// A reduced form is `p12 R12 + p13 R13 + p23 R23` with `p >= 0`, and the
/// stabilizer of the principal cone permutes the three coefficients. The
/// representative takes them ascending, which minimizes `(q11, q22)`.
pub fn binary_normal_form(q: &QuadForm) -> Result<(IntMatrix, QuadForm)> {
    let (h0, r) = reduce_binary(q)?;
    // Superbase v0 = -e1 - e2, v1 = e1, v2 = e2; a basis is any ordered pair.
    let v = [vec![-1, -1], vec![1, 0], vec![0, 1]];
    let mut best: Option<(IntMatrix, QuadForm)> = None;
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let t = IntMatrix::from_i64(&[v[i].clone(), v[j].clone()]);
            let cand = r.transform(&t);
            let key = |f: &QuadForm| (f.get(0, 0).clone(), f.get(1, 1).clone());
            if best.as_ref().is_none_or(|(_, b)| key(&cand) < key(b)) {
                best = Some((t.mul(&h0), cand));
            }
        }
    }
    Ok(best.expect("six candidates"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_reductions() {
        let (h, r) = reduce_binary(&QuadForm::from_i64(&[vec![2, 1], vec![1, 2]]).unwrap()).unwrap();
        assert_eq!(h, IntMatrix::from_i64(&[vec![1, 0], vec![0, -1]]));
        assert_eq!(r, QuadForm::from_i64(&[vec![2, -1], vec![-1, 2]]).unwrap());

        let (h, r) = reduce_binary(&QuadForm::identity(2)).unwrap();
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(r, QuadForm::identity(2));

        let q = QuadForm::from_i64(&[vec![5, 3], vec![3, 2]]).unwrap();
        let (h, r) = reduce_binary(&q).unwrap();
        assert_eq!(h, IntMatrix::from_i64(&[vec![1, -1], vec![0, -1]]));
        assert_eq!(r, QuadForm::from_i64(&[vec![1, -1], vec![-1, 2]]).unwrap());
        assert_eq!(q.transform(&h), r);
        assert!(h.is_unimodular() && in_principal_cone(&r));
    }

    #[test]
    fn long_descent() {
        let q = QuadForm::from_i64(&[vec![1, 40], vec![40, 1601]]).unwrap();
        let (h, r) = reduce_binary(&q).unwrap();
        assert!(in_principal_cone(&r));
        assert_eq!(q.transform(&h), r);
        let (h, n) = binary_normal_form(&q).unwrap();
        assert_eq!(n, QuadForm::identity(2));
        assert_eq!(q.transform(&h), n);
    }

    #[test]
    fn normal_forms_separate_classes() {
        let a = binary_normal_form(&QuadForm::from_i64(&[vec![1, -1], vec![-1, 2]]).unwrap()).unwrap().1;
        assert_eq!(a, QuadForm::identity(2));
        let t = binary_normal_form(&QuadForm::from_i64(&[vec![2, 1], vec![1, 2]]).unwrap()).unwrap().1;
        assert_eq!(t, QuadForm::from_i64(&[vec![2, -1], vec![-1, 2]]).unwrap());
        let u = binary_normal_form(&QuadForm::from_i64(&[vec![3, 1], vec![1, 2]]).unwrap()).unwrap().1;
        assert_eq!(u, QuadForm::from_i64(&[vec![2, -1], vec![-1, 3]]).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(reduce_binary(&QuadForm::from_i64(&[vec![1, 1], vec![1, 1]]).unwrap()), Err(Error::NotDefinite));
        assert!(reduce_binary(&QuadForm::identity(3)).is_err());
    }
}
