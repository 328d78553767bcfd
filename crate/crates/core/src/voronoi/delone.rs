//! Delone subdivisions by walking across facets.
//!
//! Each cell comes with the affine function `phi` whose graph touches the
//! lift `x -> q(x)` exactly at the cell's vertices and stays below it
//! elsewhere. The neighbour across a facet is found by rotating `phi` about
//! the facet until it hits the next lattice point. Every `phi` is certified
//! globally: the ellipsoid `{q - phi <= 0}` must lie inside the searched box,
//! so no lattice point outside the box can undercut it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ratlin::{int_vec, int_vecs, primitive_integer_vector, IntMatrix, QuadForm, Rat, RatMatrix};
use crate::stackyfan::dd::facets_from_rays;
use crate::{Error, Result};

pub const MAX_BOX_RADIUS: i64 = 8;

/// One translation class of cells, normalized so that its lexicographically
/// smallest vertex is the origin.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeloneCell {
    #[serde(with = "int_vecs")]
    pub vertices: Vec<Vec<BigInt>>,
}

/// A facet of `cell` shared with a translate of `neighbor`. `apex` is a
/// vertex of that translate off the facet hyperplane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeloneFacet {
    pub cell: usize,
    pub neighbor: usize,
    #[serde(with = "int_vecs")]
    pub vertices: Vec<Vec<BigInt>>,
    #[serde(with = "int_vec")]
    pub apex: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeloneSubdivision {
    /// The form the subdivision was computed from.
    pub form: QuadForm,
    pub cells: Vec<DeloneCell>,
    /// Pairs of cell classes sharing a facet, `i <= j`.
    pub adjacency: Vec<(usize, usize)>,
    pub facets: Vec<DeloneFacet>,
}

impl DeloneSubdivision {
    pub fn g(&self) -> usize {
        self.form.g()
    }

    /// True when every cell is a simplex.
    pub fn is_triangulation(&self) -> bool {
        self.cells.iter().all(|c| c.vertices.len() == self.g() + 1)
    }

    /// Cell classes as sorted vertex counts, a cheap combinatorial tag.
    pub fn shape(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.cells.iter().map(|c| c.vertices.len()).collect();
        s.sort();
        s
    }
}

type Point = Vec<i64>;

#[derive(Clone, Debug)]
struct Affine {
    k: Rat,
    n: Vec<Rat>,
}

impl Affine {
    fn eval(&self, x: &[i64]) -> Rat {
        let mut v = self.k.clone();
        for (a, &b) in self.n.iter().zip(x) {
            v += a * Rat::from_integer(BigInt::from(b));
        }
        v
    }

    fn add_scaled(&self, t: &Rat, other: &Affine) -> Affine {
        Affine {
            k: &self.k + t * &other.k,
            n: self.n.iter().zip(&other.n).map(|(a, b)| a + t * b).collect(),
        }
    }
}

fn homogenize(x: &[i64]) -> Vec<Rat> {
    std::iter::once(Rat::from_integer(1.into())).chain(x.iter().map(|&c| Rat::from_integer(c.into()))).collect()
}

fn affine_rank(points: &[Point]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let d = points[0].len() + 1;
    RatMatrix::from_rows(points.iter().map(|p| homogenize(p)).collect(), d).rank()
}

fn to_big(p: &[i64]) -> Vec<BigInt> {
    p.iter().map(|&c| BigInt::from(c)).collect()
}

fn normalize(mut cell: Vec<Point>) -> (Vec<Point>, Point) {
    cell.sort();
    let base = cell[0].clone();
    let out = cell.iter().map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect()).collect();
    (out, base)
}

struct Walker<'a> {
    q: &'a QuadForm,
    qinv: RatMatrix,
    radius: i64,
    points: Vec<(Point, Rat)>,
}

impl<'a> Walker<'a> {
    fn new(q: &'a QuadForm, radius: i64) -> Self {
        let g = q.g();
        let mut points = vec![vec![-radius; g]];
        for i in 0..g {
            let mut next = Vec::new();
            for p in &points {
                for t in -radius..=radius {
                    let mut p = p.clone();
                    p[i] = t;
                    next.push(p);
                }
            }
            points = next;
        }
        let points = points
            .into_iter()
            .map(|p| {
                let v = q.value(&to_big(&p));
                (p, v)
            })
            .collect();
        let qinv = q.matrix().inverse().expect("definite form");
        Walker { q, qinv, radius, points }
    }

    /// `{q - phi <= 0}` lies inside the box.
    fn certified(&self, phi: &Affine) -> bool {
        let g = self.q.g();
        let half = Rat::new(1.into(), 2.into());
        let c: Vec<Rat> = self.qinv.apply(&phi.n).into_iter().map(|x| x * &half).collect();
        let rho = &phi.k + self.q.bilinear(&c, &c);
        let r = Rat::from_integer(self.radius.into());
        (0..g).all(|i| {
            let need = &rho * self.qinv.get(i, i);
            let lo = &c[i] + &r;
            let hi = &r - &c[i];
            !lo.is_negative() && !hi.is_negative() && &lo * &lo >= need && &hi * &hi >= need
        })
    }

    fn contacts(&self, phi: &Affine) -> Vec<Point> {
        self.points.iter().filter(|(p, v)| *v == phi.eval(p)).map(|(p, _)| p.clone()).collect()
    }

    /// Rotates `phi` in direction `psi` until the next box point is touched.
    fn rotate(&self, phi: &Affine, psi: &Affine) -> Option<Affine> {
        let mut best: Option<Rat> = None;
        for (p, v) in &self.points {
            let s = psi.eval(p);
            if s.is_positive() {
                let t = (v - phi.eval(p)) / s;
                if best.as_ref().is_none_or(|b| t < *b) {
                    best = Some(t);
                }
            }
        }
        best.map(|t| phi.add_scaled(&t, psi))
    }

    fn initial_cell(&self) -> Option<Vec<Point>> {
        let g = self.q.g();
        let mut phi = Affine { k: Rat::zero(), n: vec![Rat::zero(); g] };
        let mut contacts = vec![vec![0; g]];
        while affine_rank(&contacts) < g + 1 {
            let rows = contacts.iter().map(|p| homogenize(p)).collect();
            let a = RatMatrix::from_rows(rows, g + 1).nullspace().swap_remove(0);
            let psi = Affine { k: a[0].clone(), n: a[1..].to_vec() };
            phi = self.rotate(&phi, &psi)?;
            contacts = self.contacts(&phi);
        }
        self.certified(&phi).then_some(contacts)
    }

    fn lifting(&self, cell: &[Point]) -> Affine {
        let g = self.q.g();
        let rows: Vec<Vec<Rat>> = cell.iter().map(|p| homogenize(p)).collect();
        let rhs: Vec<Rat> = cell.iter().map(|p| self.q.value(&to_big(p))).collect();
        let sol = RatMatrix::from_rows(rows, g + 1).solve(&rhs).expect("cell vertices lie on one lifted hyperplane");
        Affine { k: sol[0].clone(), n: sol[1..].to_vec() }
    }
}

fn facet_normals(cell: &[Point]) -> Vec<Vec<BigInt>> {
    let d = cell[0].len() + 1;
    let rays: Vec<Vec<BigInt>> = cell
        .iter()
        .map(|p| std::iter::once(BigInt::from(1)).chain(p.iter().map(|&c| BigInt::from(c))).collect())
        .collect();
    let (_, facets) = facets_from_rays(d, &rays).expect("a polytope cone is pointed");
    facets
}

fn eval_int(a: &[BigInt], p: &[i64]) -> BigInt {
    let mut v = a[0].clone();
    for (x, &c) in a[1..].iter().zip(p) {
        v += x * BigInt::from(c);
    }
    v
}

fn try_delone(q: &QuadForm, radius: i64) -> Option<DeloneSubdivision> {
    let w = Walker::new(q, radius);
    let first = w.initial_cell()?;
    let mut classes: BTreeMap<Vec<Point>, usize> = BTreeMap::new();
    let mut cells: Vec<Vec<Point>> = Vec::new();
    let (norm, _) = normalize(first);
    classes.insert(norm.clone(), 0);
    cells.push(norm);
    let mut facets = Vec::new();
    let mut i = 0;
    while i < cells.len() {
        let cell = cells[i].clone();
        let phi = w.lifting(&cell);
        if !w.certified(&phi) {
            return None;
        }
        for a in facet_normals(&cell) {
            let psi = Affine {
                k: -Rat::from_integer(a[0].clone()),
                n: a[1..].iter().map(|x| -Rat::from_integer(x.clone())).collect(),
            };
            let next = w.rotate(&phi, &psi)?;
            if !w.certified(&next) {
                return None;
            }
            let touched = w.contacts(&next);
            let apex = touched.iter().find(|p| eval_int(&a, p).is_negative()).expect("rotation touches a new point").clone();
            let on_facet: Vec<Point> = cell.iter().filter(|p| eval_int(&a, p).is_zero()).cloned().collect();
            let (norm, _) = normalize(touched);
            let j = match classes.get(&norm) {
                Some(&j) => j,
                None => {
                    classes.insert(norm.clone(), cells.len());
                    cells.push(norm);
                    cells.len() - 1
                }
            };
            facets.push(DeloneFacet {
                cell: i,
                neighbor: j,
                vertices: on_facet.iter().map(|p| to_big(p)).collect(),
                apex: to_big(&apex),
            });
        }
        i += 1;
    }
    let mut adjacency: Vec<(usize, usize)> = facets.iter().map(|f| (f.cell.min(f.neighbor), f.cell.max(f.neighbor))).collect();
    adjacency.sort();
    adjacency.dedup();
    Some(DeloneSubdivision {
        form: q.clone(),
        cells: cells.iter().map(|c| DeloneCell { vertices: c.iter().map(|p| to_big(p)).collect() }).collect(),
        adjacency,
        facets,
    })
}

/// Unimodular `h` making `h q h^T` pairwise reduced: `|2 q_ij| <= q_ii`.
fn pair_reduce(q: &QuadForm) -> IntMatrix {
    let g = q.g();
    let mut h = IntMatrix::identity(g);
    let mut cur = q.clone();
    loop {
        let mut changed = false;
        for i in 0..g {
            for j in 0..g {
                let (qij, qii) = (cur.get(i, j).clone(), cur.get(i, i).clone());
                if i == j || (&qij + &qij).abs() <= qii {
                    continue;
                }
                let r = (qij / qii).round().to_integer();
                let mut e = IntMatrix::identity(g);
                e.set(j, i, -r);
                h = e.mul(&h);
                cur = cur.transform(&e);
                changed = true;
            }
        }
        if !changed {
            return h;
        }
    }
}

// Delone(q) is h^T Delone(h q h^T); cells are renormalized after mapping.
fn pull_back(d: DeloneSubdivision, q: &QuadForm, h: &IntMatrix) -> DeloneSubdivision {
    let ht = h.transpose();
    let map = |p: &Vec<BigInt>| ht.apply(p);
    let mut shifts = Vec::with_capacity(d.cells.len());
    let cells: Vec<DeloneCell> = d
        .cells
        .iter()
        .map(|c| {
            let mut vs: Vec<Vec<BigInt>> = c.vertices.iter().map(map).collect();
            vs.sort();
            let base = vs[0].clone();
            let vs = vs.iter().map(|v| v.iter().zip(&base).map(|(a, b)| a - b).collect()).collect();
            shifts.push(base);
            DeloneCell { vertices: vs }
        })
        .collect();
    let shift = |p: Vec<BigInt>, s: &[BigInt]| -> Vec<BigInt> { p.iter().zip(s).map(|(a, b)| a - b).collect() };
    let facets = d
        .facets
        .into_iter()
        .map(|f| {
            let s = &shifts[f.cell];
            let mut vertices: Vec<Vec<BigInt>> = f.vertices.iter().map(|p| shift(map(p), s)).collect();
            vertices.sort();
            DeloneFacet { cell: f.cell, neighbor: f.neighbor, vertices, apex: shift(map(&f.apex), s) }
        })
        .collect();
    DeloneSubdivision { form: q.clone(), cells, adjacency: d.adjacency, facets }
}

/// Delone subdivision of a positive definite form, one cell per translation
/// class. Semidefinite forms are rejected; split off the null block with
/// [`split_off_null`](crate::ratlin::split_off_null) first.
pub fn delone(q: &QuadForm) -> Result<DeloneSubdivision> {
    let (rank, _) = q.classify();
    if !q.is_psd() {
        return Err(Error::Indefinite);
    }
    if rank < q.g() {
        return Err(Error::RankDeficient { rank, dim: q.g() });
    }
    if q.g() == 0 {
        return Err(Error::Unsupported("Delone subdivision of the zero lattice".into()));
    }
    let h = pair_reduce(q);
    let reduced = q.transform(&h);
    for radius in 2..=MAX_BOX_RADIUS {
        if let Some(d) = try_delone(&reduced, radius) {
            return Ok(pull_back(d, q, &h));
        }
    }
    Err(Error::SizeGuard { what: "Delone box radius", value: MAX_BOX_RADIUS as usize + 1, limit: MAX_BOX_RADIUS as usize })
}

/// Affine dependencies among `points`, as primitive integer coefficient
/// vectors `lambda` with `sum lambda_i = 0` and `sum lambda_i p_i = 0`.
pub(crate) fn affine_dependencies(points: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if points.is_empty() {
        return Vec::new();
    }
    let d = points[0].len() + 1;
    let cols: Vec<Vec<Rat>> = points
        .iter()
        .map(|p| std::iter::once(Rat::from_integer(1.into())).chain(p.iter().map(|c| Rat::from_integer(c.clone()))).collect())
        .collect();
    let m = RatMatrix::from_rows(cols, d).transpose();
    m.nullspace().iter().map(|v| primitive_integer_vector(v)).collect()
}
