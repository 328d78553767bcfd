use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

fn add_row_multiple(a: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    for j in 0..a.cols() {
        let v = a.get(target, j) + factor * a.get(source, j);
        a.set(target, j, v);
    }
}

fn negate_row(a: &mut IntMatrix, i: usize) {
    for j in 0..a.cols() {
        let v = -a.get(i, j);
        a.set(i, j, v);
    }
}

// Replaces rows (r, i) by [[s, t], [-y/g, x/g]] times them; determinant 1.
fn combine_rows(a: &mut IntMatrix, r: usize, i: usize, s: &BigInt, t: &BigInt, yg: &BigInt, xg: &BigInt) {
    for j in 0..a.cols() {
        let ar = a.get(r, j).clone();
        let ai = a.get(i, j).clone();
        a.set(r, j, s * &ar + t * &ai);
        a.set(i, j, xg * &ai - yg * &ar);
    }
}

/// Row Hermite normal form: returns `(h, u)` with `h = u * m`, `u` unimodular,
/// pivots positive and entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        for i in r + 1..a.rows() {
            if a.get(i, c).is_zero() {
                continue;
            }
            let x = a.get(r, c).clone();
            let y = a.get(i, c).clone();
            let eg = x.extended_gcd(&y);
            let g = eg.gcd;
            let (xg, yg) = (&x / &g, &y / &g);
            combine_rows(&mut a, r, i, &eg.x, &eg.y, &yg, &xg);
            combine_rows(&mut u, r, i, &eg.x, &eg.y, &yg, &xg);
        }
        if a.get(r, c).is_zero() {
            continue;
        }
        if a.get(r, c).is_negative() {
            negate_row(&mut a, r);
            negate_row(&mut u, r);
        }
        let p = a.get(r, c).clone();
        for i in 0..r {
            let f = -a.get(i, c).div_floor(&p);
            if !f.is_zero() {
                add_row_multiple(&mut a, i, r, &f);
                add_row_multiple(&mut u, i, r, &f);
            }
        }
        r += 1;
    }
    (a, u)
}

/// Lattice basis (as rows) of `{x in Z^n : m x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(&m.transpose());
    let rank = (0..h.rows()).take_while(|&i| h.row(i).iter().any(|x| !x.is_zero())).count();
    let idx: Vec<usize> = (rank..u.rows()).collect();
    let k = u.select_rows(&idx);
    if k.rows() == 0 {
        return k;
    }
    let (hk, _) = hnf(&k);
    hk
}

/// Hermite basis of the saturation `span(rows) ∩ Z^n` of a lattice given by
/// generating rows.
pub fn saturate(rows: &IntMatrix) -> IntMatrix {
    let n = rows.cols();
    let dual = integer_kernel(rows);
    if dual.rows() == 0 {
        return IntMatrix::identity(n);
    }
    integer_kernel(&dual)
}

/// Nonzero invariant factors `d_1 | d_2 | ...` of an integer matrix.
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    loop {
        a = hnf(&a).0;
        a = hnf(&a.transpose()).0.transpose();
        let diagonal = (0..a.rows()).all(|i| (0..a.cols()).all(|j| i == j || a.get(i, j).is_zero()));
        if diagonal {
            break;
        }
    }
    let mut d: Vec<BigInt> =
        (0..a.rows().min(a.cols())).map(|i| a.get(i, i).abs()).filter(|x| !x.is_zero()).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// True when the lattice spanned by the rows is saturated in `Z^n`.
pub fn is_saturated(rows: &IntMatrix) -> bool {
    smith_invariants(rows).iter().all(|d| d.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::big;

    fn is_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut zero_seen = false;
        for i in 0..h.rows() {
            match (0..h.cols()).find(|&j| !h.get(i, j).is_zero()) {
                None => zero_seen = true,
                Some(p) => {
                    if zero_seen || last_pivot.is_some_and(|lp| p <= lp) || !h.get(i, p).is_positive() {
                        return false;
                    }
                    for k in 0..i {
                        let e = h.get(k, p);
                        if e.is_negative() || e >= h.get(i, p) {
                            return false;
                        }
                    }
                    last_pivot = Some(p);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(hnf(&id), (id.clone(), id.clone()));

        let m = IntMatrix::from_i64(&[vec![2, 4], vec![1, 3]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, IntMatrix::from_i64(&[vec![1, 1], vec![0, 2]]));
        assert_eq!(u.mul(&m), h);
        assert!(u.is_unimodular());

        let z = IntMatrix::zeros(2, 3);
        assert_eq!(hnf(&z), (z.clone(), IntMatrix::identity(2)));
    }

    #[test]
    fn hnf_shape_on_rectangular() {
        let m = IntMatrix::from_i64(&[vec![3, 6, 9], vec![2, -4, 8], vec![5, 2, 17], vec![0, 0, 1]]);
        let (h, u) = hnf(&m);
        assert!(is_hnf(&h));
        assert_eq!(u.mul(&m), h);
        assert!(u.is_unimodular());
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_invariants(&IntMatrix::from_i64(&[vec![2, 0], vec![0, 3]])), vec![big(1), big(6)]);
        assert_eq!(smith_invariants(&IntMatrix::from_i64(&[vec![2, 4], vec![1, 3]])), vec![big(1), big(2)]);
        assert!(smith_invariants(&IntMatrix::zeros(2, 2)).is_empty());
    }

    #[test]
    fn kernels_and_saturation() {
        let m = IntMatrix::from_i64(&[vec![1, 1, 1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.rows(), 2);
        assert!(k.mul(&m.transpose()).is_zero());
        assert!(is_saturated(&k));

        let doubled = IntMatrix::from_i64(&[vec![2, 2, 0]]);
        assert!(!is_saturated(&doubled));
        assert_eq!(saturate(&doubled), IntMatrix::from_i64(&[vec![1, 1, 0]]));
    }

    #[test]
    fn determinant_and_inverse() {
        let m = IntMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.det(), big(1));
        assert_eq!(m.unimodular_inverse().unwrap(), IntMatrix::from_i64(&[vec![1, -1], vec![-1, 2]]));
        assert_eq!(IntMatrix::from_i64(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]).det(), big(-3));
    }
}
