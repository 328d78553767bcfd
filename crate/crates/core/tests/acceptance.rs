//! Acceptance gate: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::oracle::{isomorphic, oracle, to_raw};
use tropical_torelli::graphs::{virtual_graph, WeightedGraph};
use tropical_torelli::markings::teich::level_model;
use tropical_torelli::markings::{apply_auto, concat, inverse_path, tighten, validate_marking, EdgePath, Marking, NielsenAuto, Step};
use tropical_torelli::moduli::{build_moduli_fan, enumerate_stable, enumerate_stable_pure, Catalogue};
use tropical_torelli::ratlin::{big, rat, sym_dim, IntMatrix, QuadForm, Rat, RatMatrix};
use tropical_torelli::stackyfan::{poset_isomorphism, quotient_point_bijection_check, stratified_quotient, IdealCone, DEFAULT_BUDGET};
use tropical_torelli::torelli::{compat_check_genus, marked_period, period_on_cell, Sigma};
use tropical_torelli::voronoi::{delone, min_vectors, perfect_cone, secondary_cone, secondary_cone_of_form, transform_cone};

const R12: [i64; 3] = [1, -1, 1];
const R13: [i64; 3] = [1, 0, 0];
const R23: [i64; 3] = [0, 0, 1];

fn cone(rays: &[[i64; 3]]) -> IdealCone {
    let gens: Vec<Vec<BigInt>> = rays.iter().map(|r| r.iter().map(|&x| big(x)).collect()).collect();
    IdealCone::new(3, &gens, &[]).unwrap()
}

fn form(rows: &[Vec<Rat>]) -> QuadForm {
    QuadForm::new(RatMatrix::from_rows(rows.to_vec(), rows.len())).unwrap()
}

fn binary(a: Rat, b: Rat, c: Rat) -> QuadForm {
    form(&[vec![a, b.clone()], vec![b, c]])
}

fn intro_marking() -> Marking {
    let g = WeightedGraph::new(vec![0, 0, 0], vec![(0, 1), (0, 1), (0, 1), (1, 2), (2, 2)]).unwrap();
    let st = Step::new;
    Marking::on(&g, 1, vec![vec![st(0, -1), st(1, 1)], vec![st(2, -1), st(1, 1)], vec![st(3, 1), st(4, 1), st(3, -1)]]).unwrap()
}

fn random_lengths(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rat> {
    (0..n).map(|_| rat(rng.gen_range(1..20), rng.gen_range(1..6))).collect()
}

fn random_unimodular(g: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..g).map(|_| (0..g).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let h = IntMatrix::from_i64(&rows);
        if h.is_unimodular() {
            return h;
        }
    }
}

fn intro_period() {
    let m = intro_marking();
    let l: Vec<Rat> = (1..=5).map(|i| rat(i, 1)).collect();
    let p = marked_period(m.base(), &m, &l).unwrap();
    assert_eq!(p, QuadForm::from_i64(&[vec![3, 2, 0], vec![2, 5, 0], vec![0, 0, 5]]).unwrap());
    // Symbolic check: each column is the contribution of one edge.
    let map = period_on_cell(&m);
    let expected = [[1, 0, 0, 0, 0, 0], [1, 1, 0, 1, 0, 0], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1]];
    for (col, want) in map.columns.iter().zip(expected) {
        assert_eq!(col, &want.iter().map(|&x| big(x)).collect::<Vec<_>>());
    }
}

fn perfect_cones() {
    let half = binary(rat(1, 1), rat(1, 2), rat(1, 1));
    assert!(perfect_cone(&half).unwrap().same_cone(&cone(&[R12, R13, R23])));
    for lambda in [rat(0, 1), rat(1, 4), rat(-1, 4)] {
        let q = binary(rat(1, 1), lambda, rat(1, 1));
        assert!(perfect_cone(&q).unwrap().same_cone(&cone(&[R13, R23])));
    }
    let q = binary(rat(1, 1), rat(0, 1), rat(5, 1));
    assert!(perfect_cone(&q).unwrap().same_cone(&cone(&[R13])));
}

fn secondary_cones() {
    let d1 = secondary_cone(&delone(&binary(rat(1, 1), rat(-1, 2), rat(1, 1))).unwrap()).unwrap();
    assert!(d1.cone().same_cone(&cone(&[R12, R13, R23])));
    let d2 = secondary_cone(&delone(&QuadForm::identity(2)).unwrap()).unwrap();
    assert!(d2.cone().same_cone(&cone(&[R13, R23])));
    for t in [rat(1, 1), rat(2, 1), rat(7, 3)] {
        let d3 = secondary_cone_of_form(&binary(t, rat(0, 1), rat(0, 1))).unwrap();
        assert!(d3.cone().same_cone(&cone(&[R13])));
        // Limit of the square lattice: a ray of the D2 cone.
        assert!(d3.cone().rays().iter().all(|r| d2.cone().rays().contains(r)));
    }
}

fn moduli_counts() {
    let two = enumerate_stable(2).unwrap();
    assert_eq!(two.len(), 7);
    assert_eq!(enumerate_stable_pure(2).unwrap().len(), 3);
    let o = oracle(2, 3);
    assert_eq!(o.len(), 7);
    for r in &o {
        assert_eq!(two.iter().filter(|c| isomorphic(&to_raw(c), r)).count(), 1);
    }

    let cat = Catalogue::new(3).unwrap();
    let mut reached = BTreeSet::new();
    for g in cat.graphs.iter().filter(|g| g.num_edges() == 6) {
        for mask in 0u32..(1 << 6) {
            let s: Vec<usize> = (0..6).filter(|&e| mask >> e & 1 == 1).collect();
            reached.insert(cat.find(&g.contract(&s).unwrap()).unwrap());
        }
    }
    assert_eq!(reached.len(), cat.len());
    assert!(cat.graphs.iter().all(|g| g.num_edges() <= 6));
    let fan = build_moduli_fan(3).unwrap();
    assert!((0..fan.cells.len()).all(|c| fan.cone(c).dim() <= 6));
}

fn compatibility() {
    for (g, sigma) in [(2, Sigma::V), (2, Sigma::P), (3, Sigma::V)] {
        let cells = compat_check_genus(g, sigma).unwrap();
        assert_eq!(cells.len(), enumerate_stable(g).unwrap().len());
        for c in &cells {
            assert!(c.report.passed(), "genus {g} {sigma:?} cell {}: {:?}", c.label, c.report.failures);
        }
    }
}

fn equivariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let catalogues = [Catalogue::new(2).unwrap(), Catalogue::new(3).unwrap()];
    for _ in 0..100 {
        let cat = &catalogues[rng.gen_range(0..2)];
        let g = cat.genus;
        let graph = &cat.graphs[rng.gen_range(0..cat.len())];
        let start = NielsenAuto::random(g, rng.gen_range(0..=6), &mut rng);
        let m = apply_auto(&Marking::standard(graph), &start).unwrap();
        let a = NielsenAuto::random(g, rng.gen_range(1..=6), &mut rng);
        let l = random_lengths(graph.num_edges(), &mut rng);
        let lhs = marked_period(graph, &apply_auto(&m, &a).unwrap(), &l).unwrap();
        let rhs = marked_period(graph, &m, &l).unwrap().transform(&a.abelianization(g).unwrap());
        assert_eq!(lhs, rhs);
    }
}

fn boundary_consistency() {
    let model = level_model(2, 3, DEFAULT_BUDGET).unwrap();
    let mut checked = 0;
    for m in &model.markings {
        let base = m.base();
        let p = period_on_cell(m);
        let e = base.num_edges();
        for mask in 1u32..(1 << e) {
            let s: Vec<usize> = (0..e).filter(|&i| mask >> i & 1 == 1).collect();
            if base.contains_cycle(&s) {
                continue;
            }
            let maps = base.contract_with_maps(&s).unwrap();
            let q = period_on_cell(&m.specialize(&s).unwrap());
            for (old, new) in maps.edge_map.iter().enumerate() {
                if let Some(new) = new {
                    assert_eq!(p.columns[old], q.columns[*new]);
                }
            }
            checked += 1;
        }
    }
    assert!(checked > 0);
}

fn quotient() {
    let model = level_model(2, 3, DEFAULT_BUDGET).unwrap();
    let q = stratified_quotient(&model.fan, &model.action).unwrap();
    let moduli = build_moduli_fan(2).unwrap();
    assert!(poset_isomorphism(&q.fan, &moduli).is_some());
    let report = quotient_point_bijection_check(&model.fan, &model.action, 1000, 8).unwrap();
    assert_eq!(report.samples, 1000);
    assert!(report.passed(), "{:?}", report.violations);
}

// Word in the petals of `m`: +i / -i is petal i-1 or its inverse.
fn spell(m: &Marking, word: &[i32]) -> EdgePath {
    let parts: Vec<EdgePath> = word
        .iter()
        .map(|&x| {
            let p = &m.petals()[x.unsigned_abs() as usize - 1];
            if x > 0 {
                p.clone()
            } else {
                inverse_path(p)
            }
        })
        .collect();
    let refs: Vec<&[Step]> = parts.iter().map(|p| p.as_slice()).collect();
    concat(&refs)
}

fn with_backtracks(m: &Marking, p: &[Step], rng: &mut ChaCha8Rng) -> EdgePath {
    let g = m.graph();
    let mut out = p.to_vec();
    for _ in 0..rng.gen_range(1..=3) {
        let at = rng.gen_range(0..=out.len());
        let v = if at == 0 { m.basepoint() } else { out[at - 1].ends(g).1 };
        let incident: Vec<Step> = (0..g.num_edges())
            .flat_map(|e| [Step::new(e, 1), Step::new(e, -1)])
            .filter(|s| s.ends(g).0 == v)
            .collect();
        let s = incident[rng.gen_range(0..incident.len())];
        out.splice(at..at, [s, s.inverse()]);
    }
    out
}

fn folding_validator() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let catalogues = [Catalogue::new(2).unwrap(), Catalogue::new(3).unwrap()];
    let mut accepted = 0;
    let mut rejected = 0;
    while accepted < 200 || rejected < 200 {
        let cat = &catalogues[rng.gen_range(0..2)];
        let g = cat.genus;
        let graph = &cat.graphs[rng.gen_range(0..cat.len())];
        let m = apply_auto(&Marking::standard(graph), &NielsenAuto::random(g, rng.gen_range(0..=8), &mut rng)).unwrap();
        let vg = m.graph();
        let bp = m.basepoint();
        if accepted < 200 {
            let petals: Vec<EdgePath> = m.petals().to_vec();
            assert!(validate_marking(vg, bp, &petals).unwrap());
            let noisy: Vec<EdgePath> = petals.iter().map(|p| with_backtracks(&m, p, &mut rng)).collect();
            assert!(validate_marking(vg, bp, &noisy).unwrap());
            let tight: Vec<EdgePath> = noisy.iter().map(|p| tighten(vg, bp, p).unwrap()).collect();
            assert!(validate_marking(vg, bp, &tight).unwrap());
            accepted += 1;
        }
        // Random words in the petals with a non-unimodular exponent matrix.
        let words: Vec<Vec<i32>> = (0..g)
            .map(|_| {
                (0..rng.gen_range(0..=4))
                    .map(|_| {
                        let i = rng.gen_range(1..=g as i32);
                        if rng.gen_bool(0.5) {
                            i
                        } else {
                            -i
                        }
                    })
                    .collect()
            })
            .collect();
        let rows: Vec<Vec<i64>> = words
            .iter()
            .map(|w| {
                let mut row = vec![0i64; g];
                for &x in w {
                    row[x.unsigned_abs() as usize - 1] += i64::from(x.signum());
                }
                row
            })
            .collect();
        if IntMatrix::from_i64(&rows).det().abs() == big(1) || rejected >= 200 {
            continue;
        }
        let petals: Vec<EdgePath> = words.iter().map(|w| spell(&m, w)).collect();
        assert!(!validate_marking(vg, bp, &petals).unwrap());
        let noisy: Vec<EdgePath> = petals.iter().map(|p| with_backtracks(&m, p, &mut rng)).collect();
        assert!(!validate_marking(vg, bp, &noisy).unwrap());
        let tight: Vec<EdgePath> = noisy.iter().map(|p| tighten(vg, bp, p).unwrap()).collect();
        assert!(!validate_marking(vg, bp, &tight).unwrap());
        rejected += 1;
    }
    // The virtual graph of a weighted vertex carries its loops as petals too.
    let vg = virtual_graph(&WeightedGraph::point(2));
    assert!(validate_marking(&vg, 0, &[vec![Step::new(0, 1)], vec![Step::new(1, 1)]]).unwrap());
    assert!(!validate_marking(&vg, 0, &[vec![Step::new(0, 1)], vec![Step::new(0, 1)]]).unwrap());
}

fn voronoi_equivariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for k in 0..50 {
        let g = 2 + k % 2;
        let m = IntMatrix::from_i64(&(0..g).map(|_| (0..g).map(|_| rng.gen_range(-2..=2)).collect()).collect::<Vec<_>>());
        let mut mmt = m.mul(&m.transpose());
        for i in 0..g {
            mmt.set(i, i, mmt.get(i, i) + 1);
        }
        let q = QuadForm::new(mmt.to_rat()).unwrap();
        let h = random_unimodular(g, &mut rng);
        let hq = q.transform(&h);
        let ht = h.transpose();

        let mv = min_vectors(&q).unwrap();
        let mv_h = min_vectors(&hq).unwrap();
        assert_eq!(mv.mu, mv_h.mu);
        let pulled: BTreeSet<Vec<BigInt>> = mv_h.vectors.iter().map(|x| ht.apply(x)).collect();
        let direct: BTreeSet<Vec<BigInt>> = mv.vectors.iter().cloned().collect();
        assert_eq!(pulled, direct);

        // Minimal vectors move by h^-T, so perfect cones are contravariant.
        let pc = perfect_cone(&q).unwrap();
        let inv_t = h.unimodular_inverse().unwrap().transpose();
        assert!(perfect_cone(&hq).unwrap().same_cone(&transform_cone(g, &inv_t, &pc).unwrap()));

        let sc = secondary_cone_of_form(&q).unwrap();
        let sc_h = secondary_cone_of_form(&hq).unwrap();
        assert!(sc_h.cone().same_cone(&transform_cone(g, &h, sc.cone()).unwrap()));
        assert_eq!(sc.cone().dim(), sc_h.cone().dim());
        assert!(sc.cone().dim() <= sym_dim(g));
        assert_eq!(delone(&q).unwrap().shape(), delone(&hq).unwrap().shape());
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 10] = [
        ("intro period matrix", intro_period),
        ("genus 2 perfect cones", perfect_cones),
        ("genus 2 secondary cones", secondary_cones),
        ("moduli counts", moduli_counts),
        ("compatibility with V and P", compatibility),
        ("period map equivariance", equivariance),
        ("boundary consistency", boundary_consistency),
        ("quotient correctness", quotient),
        ("folding validator", folding_validator),
        ("voronoi equivariance", voronoi_equivariance),
    ];
    panic::set_hook(Box::new(|info| eprintln!("{info}")));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let ok = panic::catch_unwind(AssertUnwindSafe(f)).is_ok();
        if !ok {
            failed += 1;
        }
        println!("{} {:>2} {name} ({:.2?})", if ok { "PASS" } else { "FAIL" }, i + 1, t.elapsed());
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
