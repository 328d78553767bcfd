//! Exact double description for pointed polyhedral cones of small dimension.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::ratlin::{dot, integer_kernel, make_primitive, IntMatrix};

fn reduce(v: Vec<BigInt>) -> Vec<BigInt> {
    make_primitive(&v)
}

fn combine(a: &BigInt, x: &[BigInt], b: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    x.iter().zip(y).map(|(p, q)| a * p + b * q).collect()
}

/// Extreme rays of `{x in R^d : ineq_i . x >= 0, eq_j . x = 0}`.
///
/// Returns `None` when the cone contains a line. Rays are primitive integer
/// vectors, sorted.
pub fn rays_from_inequalities(d: usize, ineqs: &[Vec<BigInt>], eqs: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    // Start from a lattice basis of the equality space, as lines.
    let mut lines: Vec<Vec<BigInt>> = if eqs.is_empty() {
        IntMatrix::identity(d).row_vecs()
    } else {
        integer_kernel(&IntMatrix::from_rows(eqs.to_vec(), d)).row_vecs()
    };
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    // For each ray, the indices of processed inequalities tight at it.
    let mut tight: Vec<Vec<usize>> = Vec::new();

    for (k, a) in ineqs.iter().enumerate() {
        if let Some(li) = lines.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lines.remove(li);
            let al = dot(a, &l);
            for other in lines.iter_mut() {
                let ao = dot(a, other);
                if !ao.is_zero() {
                    *other = reduce(combine(&al, other, &(-&ao), &l));
                }
            }
            for r in rays.iter_mut() {
                let ar = dot(a, r);
                if !ar.is_zero() {
                    // Keep the ray in the same half space of previous constraints.
                    let f = if al.is_positive() { al.clone() } else { -al.clone() };
                    let g = if al.is_positive() { -ar } else { ar };
                    *r = reduce(combine(&f, r, &g, &l));
                }
            }
            if al.is_negative() {
                l = l.into_iter().map(|x| -x).collect();
            }
            for t in tight.iter_mut() {
                t.push(k);
            }
            rays.push(l);
            tight.push((0..k).collect());
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut new_rays = Vec::new();
        let mut new_tight = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<usize> = tight[p].iter().filter(|i| tight[n].contains(i)).copied().collect();
                let adjacent = (0..rays.len())
                    .filter(|&o| o != p && o != n)
                    .all(|o| !common.iter().all(|i| tight[o].contains(i)));
                if !adjacent {
                    continue;
                }
                let r = reduce(combine(&vals[p], &rays[n], &(-&vals[n]), &rays[p]));
                let mut t = common;
                t.push(k);
                new_rays.push(r);
                new_tight.push(t);
            }
        }
        let mut kept_rays = Vec::new();
        let mut kept_tight = Vec::new();
        for i in 0..rays.len() {
            if vals[i].is_negative() {
                continue;
            }
            let mut t = tight[i].clone();
            if vals[i].is_zero() {
                t.push(k);
            }
            kept_rays.push(rays[i].clone());
            kept_tight.push(t);
        }
        kept_rays.extend(new_rays);
        kept_tight.extend(new_tight);
        rays = kept_rays;
        tight = kept_tight;
    }
    if !lines.is_empty() {
        return None;
    }
    // The adjacency test is exact, but drop duplicates defensively.
    rays.sort();
    rays.dedup();
    rays.retain(|r| r.iter().any(|x| !x.is_zero()));
    Some(rays)
}

/// Facet description of `cone(rays)`: returns `(equalities, facet normals)`
/// where the equalities span the orthogonal complement of the linear span
/// and each facet normal lies in the span and is nonnegative on all rays.
/// Returns `None` when the cone is not pointed.
pub fn facets_from_rays(d: usize, rays: &[Vec<BigInt>]) -> Option<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>)> {
    if rays.is_empty() {
        return Some((IntMatrix::identity(d).row_vecs(), Vec::new()));
    }
    let eqs = integer_kernel(&IntMatrix::from_rows(rays.to_vec(), d)).row_vecs();
    // Dual cone restricted to the span: y . r >= 0 for rays r, y . z = 0 for z
    // in the orthogonal complement.
    // The dual inside the span is full-dimensional iff the cone is pointed.
    let facets = rays_from_inequalities(d, rays, &eqs)?;
    let rank = |m: &[Vec<BigInt>]| if m.is_empty() { 0 } else { IntMatrix::from_rows(m.to_vec(), d).to_rat().rank() };
    if rank(&facets) < d - eqs.len() {
        return None;
    }
    Some((eqs, facets))
}
