use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ratlin::{int_vecs, int_to_rat, outer_sym, rat_str, sym_dim, IntMatrix, QuadForm, Rat};
use crate::stackyfan::IdealCone;
use crate::{Error, Result};

/// Arithmetic minimum and the full set of minimal vectors, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinVecSet {
    #[serde(with = "rat_str")]
    pub mu: Rat,
    #[serde(with = "int_vecs")]
    pub vectors: Vec<Vec<BigInt>>,
}

/// `q = U^T D U` with `U` unit upper triangular: returns `(d, u)`.
fn upper_ldl(q: &QuadForm) -> (Vec<Rat>, Vec<Vec<Rat>>) {
    let g = q.g();
    let mut a = q.matrix().clone();
    let mut d = vec![Rat::zero(); g];
    let mut u = vec![vec![Rat::zero(); g]; g];
    for i in 0..g {
        d[i] = a.get(i, i).clone();
        for j in i + 1..g {
            u[i][j] = a.get(i, j) / &d[i];
        }
        for j in i + 1..g {
            for k in i + 1..g {
                let v = a.get(j, k) - &u[i][j] * &u[i][k] * &d[i];
                a.set(j, k, v);
            }
        }
    }
    (d, u)
}

/// Smallest integer `r >= 0` with `r^2 >= s`.
fn ceil_sqrt(s: &Rat) -> BigInt {
    if !s.is_positive() {
        return BigInt::zero();
    }
    let c = s.ceil().to_integer();
    let r = c.sqrt();
    if &r * &r < c {
        r + 1
    } else {
        r
    }
}

/// All nonzero integer vectors with `q(x) <= bound`, sorted lexicographically.
///
/// Fincke-Pohst search: coordinates are fixed from the last to the first and
/// each range is bounded exactly by the remaining budget.
pub fn short_vectors(q: &QuadForm, bound: &Rat) -> Result<Vec<Vec<BigInt>>> {
    if !q.is_positive_definite() {
        return Err(Error::NotDefinite);
    }
    let g = q.g();
    let (d, u) = upper_ldl(q);
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); g];
    fn rec(i: usize, rest: Rat, d: &[Rat], u: &[Vec<Rat>], x: &mut Vec<BigInt>, out: &mut Vec<Vec<BigInt>>) {
        let g = x.len();
        let mut centre = Rat::zero();
        for j in i + 1..g {
            centre -= &u[i][j] * int_to_rat(&x[j]);
        }
        let r = ceil_sqrt(&(&rest / &d[i]));
        let lo = (&centre - int_to_rat(&r)).floor().to_integer();
        let hi = (&centre + int_to_rat(&r)).ceil().to_integer();
        let mut t = lo;
        while t <= hi {
            let diff = int_to_rat(&t) - &centre;
            let used = &d[i] * &diff * &diff;
            if used <= rest {
                x[i] = t.clone();
                if i == 0 {
                    if x.iter().any(|c| !c.is_zero()) {
                        out.push(x.clone());
                    }
                } else {
                    rec(i - 1, &rest - &used, d, u, x, out);
                }
            }
            t += 1;
        }
        x[i] = BigInt::zero();
    }
    if g > 0 && !bound.is_negative() {
        rec(g - 1, bound.clone(), &d, &u, &mut x, &mut out);
    }
    out.sort();
    Ok(out)
}

/// Arithmetic minimum and minimal vectors of a positive definite form.
pub fn min_vectors(q: &QuadForm) -> Result<MinVecSet> {
    if !q.is_positive_definite() {
        return Err(Error::NotDefinite);
    }
    if q.g() == 0 {
        return Err(Error::Unsupported("minimum of a form on the zero lattice".into()));
    }
    let bound = (0..q.g()).map(|i| q.get(i, i).clone()).min().expect("g > 0");
    let cands = short_vectors(q, &bound)?;
    let values: Vec<Rat> = cands.iter().map(|x| q.value(x)).collect();
    let mu = values.iter().min().expect("basis vectors are within the bound").clone();
    let vectors = cands.into_iter().zip(values).filter(|(_, v)| *v == mu).map(|(x, _)| x).collect();
    Ok(MinVecSet { mu, vectors })
}

/// Minimal vectors up to sign, each with positive first nonzero entry.
pub fn minimal_vectors_up_to_sign(m: &MinVecSet) -> Vec<Vec<BigInt>> {
    m.vectors
        .iter()
        .filter(|x| x.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive()))
        .cloned()
        .collect()
}

/// The cone spanned by `x x^T` over the minimal vectors `x` of `q`.
pub fn perfect_cone(q: &QuadForm) -> Result<IdealCone> {
    let m = min_vectors(q)?;
    let gens: Vec<Vec<BigInt>> = minimal_vectors_up_to_sign(&m).iter().map(|x| outer_sym(x)).collect();
    IdealCone::new(sym_dim(q.g()), &gens, &[])
}

/// True when the rank one forms of the minimal vectors span all symmetric
/// matrices.
pub fn is_perfect(q: &QuadForm) -> Result<bool> {
    let m = min_vectors(q)?;
    let gens: Vec<Vec<BigInt>> = minimal_vectors_up_to_sign(&m).iter().map(|x| outer_sym(x)).collect();
    let n = sym_dim(q.g());
    if gens.is_empty() {
        return Ok(n == 0);
    }
    Ok(IntMatrix::from_rows(gens, n).to_rat().rank() == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::{big, rat, RatMatrix};

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| big(x)).collect()
    }

    fn half() -> QuadForm {
        QuadForm::new(RatMatrix::new(2, 2, vec![rat(1, 1), rat(1, 2), rat(1, 2), rat(1, 1)])).unwrap()
    }

    #[test]
    fn minima_of_small_forms() {
        let id = min_vectors(&QuadForm::identity(2)).unwrap();
        assert_eq!(id.mu, rat(1, 1));
        assert_eq!(id.vectors, vec![v(&[-1, 0]), v(&[0, -1]), v(&[0, 1]), v(&[1, 0])]);

        let h = min_vectors(&half()).unwrap();
        assert_eq!(h.mu, rat(1, 1));
        assert_eq!(h.vectors.len(), 6);
        assert!(h.vectors.contains(&v(&[1, -1])));

        let a2 = min_vectors(&QuadForm::from_i64(&[vec![2, 1], vec![1, 2]]).unwrap()).unwrap();
        assert_eq!(a2.mu, rat(2, 1));
        assert_eq!(a2.vectors, vec![v(&[-1, 0]), v(&[-1, 1]), v(&[0, -1]), v(&[0, 1]), v(&[1, -1]), v(&[1, 0])]);
    }

    #[test]
    fn short_vectors_match_brute_force() {
        let q = QuadForm::from_i64(&[vec![3, 1, -1], vec![1, 2, 0], vec![-1, 0, 4]]).unwrap();
        let bound = rat(9, 1);
        let fast = short_vectors(&q, &bound).unwrap();
        let mut slow = Vec::new();
        for a in -4..=4 {
            for b in -4..=4 {
                for c in -4..=4 {
                    let x = v(&[a, b, c]);
                    if (a, b, c) != (0, 0, 0) && q.value(&x) <= bound {
                        slow.push(x);
                    }
                }
            }
        }
        slow.sort();
        assert_eq!(fast, slow);
    }

    #[test]
    fn perfect_cones_at_genus_two() {
        let p = perfect_cone(&half()).unwrap();
        let principal = IdealCone::new(3, &[v(&[1, -1, 1]), v(&[1, 0, 0]), v(&[0, 0, 1])], &[]).unwrap();
        assert!(p.same_cone(&principal));
        assert!(is_perfect(&half()).unwrap());
        assert!(!is_perfect(&QuadForm::identity(2)).unwrap());
        let thin = perfect_cone(&QuadForm::from_i64(&[vec![1, 0], vec![0, 5]]).unwrap()).unwrap();
        assert_eq!(thin.rays(), &[v(&[1, 0, 0])]);
    }

    #[test]
    fn rejects_semidefinite() {
        let q = QuadForm::from_i64(&[vec![1, 0], vec![0, 0]]).unwrap();
        assert_eq!(min_vectors(&q), Err(Error::NotDefinite));
    }
}
