use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tropical_torelli::graphs::WeightedGraph;
use tropical_torelli::markings::{apply_auto, markings_equivalent, tighten, validate_marking, EdgePath, EquivalenceMode, Marking, NielsenAuto, Step};
use tropical_torelli::moduli::Catalogue;
use tropical_torelli::ratlin::{split_off_null, Definiteness, IntMatrix, QuadForm};
use tropical_torelli::voronoi::{min_vectors, secondary_cone_of_form, transform_cone};

fn sym_matrix(g: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-4i64..=4, g * (g + 1) / 2).prop_map(move |v| {
        let mut rows = vec![vec![0i64; g]; g];
        let mut k = 0;
        for i in 0..g {
            for j in i..g {
                rows[i][j] = v[k];
                rows[j][i] = v[k];
                k += 1;
            }
        }
        IntMatrix::from_i64(&rows)
    })
}

fn square(g: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(lo..=hi, g), g).prop_map(|rows| IntMatrix::from_i64(&rows))
}

fn unimodular(g: usize) -> impl Strategy<Value = IntMatrix> {
    square(g, -2, 2).prop_filter("unimodular", |h| h.is_unimodular())
}

fn principal_minors(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.rows();
    (1u32..(1 << n))
        .map(|mask| {
            let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            m.select_rows(&idx).select_cols(&idx).det()
        })
        .collect()
}

// A marking on a catalogue graph of genus 2 or 3 moved by a random word.
fn random_marking() -> impl Strategy<Value = Marking> {
    (2usize..=3, any::<u64>(), 0usize..8).prop_map(|(g, seed, len)| {
        let cat = Catalogue::new(g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let graph = &cat.graphs[(seed % cat.len() as u64) as usize];
        apply_auto(&Marking::standard(graph), &NielsenAuto::random(g, len, &mut rng)).unwrap()
    })
}

fn insert_backtracks(m: &Marking, p: &[Step], picks: &[(usize, usize)]) -> EdgePath {
    let g = m.graph();
    let mut out = p.to_vec();
    for &(at, pick) in picks {
        let at = at % (out.len() + 1);
        let v = if at == 0 { m.basepoint() } else { out[at - 1].ends(g).1 };
        let incident: Vec<Step> =
            (0..g.num_edges()).flat_map(|e| [Step::new(e, 1), Step::new(e, -1)]).filter(|s| s.ends(g).0 == v).collect();
        let s = incident[pick % incident.len()];
        out.splice(at..at, [s, s.inverse()]);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ldlt_agrees_with_minors(m in (1usize..=4).prop_flat_map(sym_matrix)) {
        let q = QuadForm::new(m.to_rat()).unwrap();
        let (rank, class) = q.classify();
        prop_assert_eq!(rank, m.to_rat().rank());
        let n = m.rows();
        let leading_positive = (1..=n).all(|k| {
            let idx: Vec<usize> = (0..k).collect();
            m.select_rows(&idx).select_cols(&idx).det().is_positive()
        });
        prop_assert_eq!(class == Definiteness::PositiveDefinite, leading_positive);
        let psd = principal_minors(&m).iter().all(|d| !d.is_negative());
        prop_assert_eq!(class != Definiteness::Indefinite, psd);
    }

    #[test]
    fn split_off_null_is_a_unimodular_splitting(
        (g, a, r) in (2usize..=4).prop_flat_map(|g| (Just(g), square(g, -2, 2), 0..g))
    ) {
        // a^T diag(1..1, 0..0) a is psd of rank at most r.
        let mut d = vec![vec![0i64; g]; g];
        for (i, row) in d.iter_mut().enumerate().take(r) {
            row[i] = 1;
        }
        let m = a.transpose().mul(&IntMatrix::from_i64(&d)).mul(&a);
        let q = QuadForm::new(m.to_rat()).unwrap();
        let (h, block) = split_off_null(&q).unwrap();
        prop_assert!(h.is_unimodular());
        prop_assert!(block.is_positive_definite() || block.g() == 0);
        let t = q.transform(&h);
        for i in 0..g {
            for j in 0..g {
                let want = if i < block.g() && j < block.g() { block.get(i, j).clone() } else { Zero::zero() };
                prop_assert_eq!(t.get(i, j), &want);
            }
        }
    }

    #[test]
    fn tighten_is_idempotent(m in random_marking(), picks in prop::collection::vec((0usize..64, 0usize..64), 0..6)) {
        for p in m.petals() {
            let noisy = insert_backtracks(&m, p, &picks);
            let once = tighten(m.graph(), m.basepoint(), &noisy).unwrap();
            let twice = tighten(m.graph(), m.basepoint(), &once).unwrap();
            prop_assert_eq!(&once, &twice);
            prop_assert!(once.len() <= noisy.len());
        }
    }

    #[test]
    fn validation_ignores_backtracks(
        m in random_marking(),
        picks in prop::collection::vec((0usize..64, 0usize..64), 1..6),
        drop in any::<bool>(),
    ) {
        let mut petals: Vec<EdgePath> = m.petals().iter().map(|p| insert_backtracks(&m, p, &picks)).collect();
        if drop {
            // A doubled petal makes the H1 matrix non-unimodular.
            let p = petals[0].clone();
            petals[0].extend(p);
        }
        let verdict = validate_marking(m.graph(), m.basepoint(), &petals).unwrap();
        prop_assert_eq!(verdict, !drop);
        let tight: Vec<EdgePath> = petals.iter().map(|p| tighten(m.graph(), m.basepoint(), p).unwrap()).collect();
        prop_assert_eq!(validate_marking(m.graph(), m.basepoint(), &tight).unwrap(), verdict);
    }

    #[test]
    fn specialization_composes_weakly(m in random_marking(), mask in any::<u32>(), split in any::<u32>()) {
        let base = m.base();
        let e = base.num_edges();
        let s: Vec<usize> = (0..e).filter(|&i| mask >> i & 1 == 1).collect();
        let first: Vec<usize> = s.iter().copied().filter(|&i| split >> i & 1 == 1).collect();
        let second: Vec<usize> = s.iter().copied().filter(|&i| split >> i & 1 == 0).collect();
        let maps = base.contract_with_maps(&first).unwrap();
        let renamed: Vec<usize> = second.iter().map(|&i| maps.edge_map[i].unwrap()).collect();
        let stepwise = m.specialize(&first).unwrap().specialize(&renamed).unwrap();
        let direct = m.specialize(&s).unwrap();
        prop_assert!(markings_equivalent(&stepwise, &direct, EquivalenceMode::Weak).unwrap());
    }

    #[test]
    fn voronoi_is_equivariant(
        (g, a, h) in (2usize..=3).prop_flat_map(|g| (Just(g), square(g, -2, 2), unimodular(g)))
    ) {
        let mut m = a.mul(&a.transpose());
        for i in 0..g {
            m.set(i, i, m.get(i, i) + 1);
        }
        let q = QuadForm::new(m.to_rat()).unwrap();
        let hq = q.transform(&h);
        let mv = min_vectors(&q).unwrap();
        let mv_h = min_vectors(&hq).unwrap();
        prop_assert_eq!(&mv.mu, &mv_h.mu);
        let mut pulled: Vec<Vec<BigInt>> = mv_h.vectors.iter().map(|x| h.transpose().apply(x)).collect();
        pulled.sort();
        prop_assert_eq!(pulled, mv.vectors.clone());
        let sc = secondary_cone_of_form(&q).unwrap();
        let sc_h = secondary_cone_of_form(&hq).unwrap();
        prop_assert!(sc_h.cone().same_cone(&transform_cone(g, &h, sc.cone()).unwrap()));
    }
}

#[test]
fn specialization_does_not_compose_strictly() {
    // Contracting b then a turns a into a virtual loop met by the petals;
    // contracting {a, b} at once collapses a and leaves b as the loop.
    let m = Marking::standard(&WeightedGraph::theta());
    let stepwise = m.specialize(&[1]).unwrap().specialize(&[0]).unwrap();
    let direct = m.specialize(&[0, 1]).unwrap();
    assert!(!markings_equivalent(&stepwise, &direct, EquivalenceMode::Strict).unwrap());
    assert!(markings_equivalent(&stepwise, &direct, EquivalenceMode::Weak).unwrap());
}
