//! Cross-check of the enumerator against the brute-force oracle.

mod common;

use common::oracle::{isomorphic, oracle, to_raw};
use tropical_torelli::moduli::{build_moduli_fan, enumerate_stable, enumerate_stable_pure};

fn agree(g: usize, max_v: usize) {
    let expected = oracle(g, max_v);
    let got = enumerate_stable(g).unwrap();
    assert_eq!(got.len(), expected.len(), "class count for genus {g}");
    for e in &expected {
        assert_eq!(got.iter().filter(|c| isomorphic(&to_raw(c), e)).count(), 1, "class {e:?}");
    }
}

#[test]
fn genus_one_matches_oracle() {
    assert_eq!(oracle(1, 2).len(), 1);
    agree(1, 2);
}

#[test]
fn genus_two_matches_oracle() {
    let o = oracle(2, 3);
    assert_eq!(o.len(), 7);
    assert_eq!(o.iter().filter(|r| r.weights.iter().all(|&w| w == 0)).count(), 3);
    agree(2, 3);
    assert_eq!(enumerate_stable_pure(2).unwrap().len(), 3);
}

#[test]
fn genus_three_matches_oracle() {
    // Stable graphs of genus g have at most 2g - 2 vertices.
    let o = oracle(3, 4);
    assert_eq!(o.len(), 42);
    agree(3, 4);
}

#[test]
fn oracle_vertex_bound_is_not_binding_at_genus_two() {
    assert_eq!(oracle(2, 3).len(), oracle(2, 2).len());
}

#[test]
fn maximal_cells_cover_the_fan() {
    for g in [2, 3] {
        let fan = build_moduli_fan(g).unwrap();
        let top = 3 * g - 3;
        let maximal: Vec<usize> = (0..fan.cells.len()).filter(|&i| fan.cone(i).dim() == top).collect();
        for c in 0..fan.cells.len() {
            let covered = maximal.contains(&c) || fan.maps.iter().any(|m| m.source == c && maximal.contains(&m.target));
            assert!(covered, "cell {c} is not a face of a maximal cell");
            assert!(fan.cone(c).dim() <= top);
        }
    }
}
