use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::path::{inverse_path, reduce, EdgePath};
use super::Marking;
use crate::ratlin::IntMatrix;
use crate::{Error, Result};

/// Word in the free group: letter `±(i + 1)` is generator `i` or its inverse.
pub type Word = Vec<i32>;

pub fn reduce_word(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn invert_word(w: &[i32]) -> Word {
    w.iter().rev().map(|x| -x).collect()
}

/// Elementary Nielsen transformation of a generating tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NielsenMove {
    Swap(usize, usize),
    Invert(usize),
    /// `x_i <- x_i x_j`.
    Mul(usize, usize),
}

impl NielsenMove {
    fn check(self, g: usize) -> Result<()> {
        let ok = match self {
            NielsenMove::Swap(i, j) => i < g && j < g,
            NielsenMove::Invert(i) => i < g,
            NielsenMove::Mul(i, j) => i < g && j < g && i != j,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidMove(format!("{self:?} in rank {g}")))
        }
    }

    fn act<T: Clone>(self, tuple: &mut [T], inv: impl Fn(&T) -> T, mul: impl Fn(&T, &T) -> T) {
        match self {
            NielsenMove::Swap(i, j) => tuple.swap(i, j),
            NielsenMove::Invert(i) => tuple[i] = inv(&tuple[i]),
            NielsenMove::Mul(i, j) => tuple[i] = mul(&tuple[i], &tuple[j]),
        }
    }
}

/// Automorphism of `F_g` given by a sequence of Nielsen moves, applied to
/// the tuple of generators from first to last.
///
/// Applying `a` and then `b` to a marking is the same as applying
/// `a.then(&b)`, and the abelianizations compose as `Ab(a.then(b)) =
/// Ab(b) Ab(a)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NielsenAuto {
    pub moves: Vec<NielsenMove>,
}

impl NielsenAuto {
    pub fn identity() -> Self {
        NielsenAuto::default()
    }

    pub fn new(moves: Vec<NielsenMove>) -> Self {
        NielsenAuto { moves }
    }

    pub fn then(&self, other: &NielsenAuto) -> NielsenAuto {
        NielsenAuto { moves: self.moves.iter().chain(&other.moves).copied().collect() }
    }

    pub fn check(&self, g: usize) -> Result<()> {
        self.moves.iter().try_for_each(|m| m.check(g))
    }

    /// Images of the generators, as reduced words.
    pub fn images(&self, g: usize) -> Result<Vec<Word>> {
        self.check(g)?;
        let mut tuple: Vec<Word> = (1..=g as i32).map(|i| vec![i]).collect();
        for m in &self.moves {
            m.act(&mut tuple, |w| invert_word(w), |a, b| reduce_word(&[a.as_slice(), b.as_slice()].concat()));
        }
        Ok(tuple)
    }

    /// Exponent sums: entry `(i, j)` counts generator `j` in the image of
    /// generator `i`.
    pub fn abelianization(&self, g: usize) -> Result<IntMatrix> {
        let images = self.images(g)?;
        let rows = images
            .iter()
            .map(|w| {
                let mut row = vec![0i64; g];
                for &x in w {
                    row[x.unsigned_abs() as usize - 1] += i64::from(x.signum());
                }
                row.into_iter().map(BigInt::from).collect()
            })
            .collect();
        Ok(IntMatrix::from_rows(rows, g))
    }

    /// A random word of `len` moves in rank `g >= 2`.
    pub fn random<R: Rng>(g: usize, len: usize, rng: &mut R) -> Self {
        let moves = (0..len)
            .map(|_| {
                let i = rng.gen_range(0..g);
                let mut j = rng.gen_range(0..g - 1);
                if j >= i {
                    j += 1;
                }
                match rng.gen_range(0..3) {
                    0 => NielsenMove::Swap(i, j),
                    1 => NielsenMove::Invert(i),
                    _ => NielsenMove::Mul(i, j),
                }
            })
            .collect();
        NielsenAuto { moves }
    }
}

/// Precomposes the marking with the automorphism: petal `i` becomes the
/// image word of generator `i` spelled in the old petals.
pub fn apply_auto(m: &Marking, a: &NielsenAuto) -> Result<Marking> {
    a.check(m.genus())?;
    let mut petals: Vec<EdgePath> = m.petals().to_vec();
    for mv in &a.moves {
        mv.act(&mut petals, |p| inverse_path(p), |p, q| reduce(&[p.as_slice(), q.as_slice()].concat()));
    }
    Marking::new(m.graph().clone(), m.basepoint(), petals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::WeightedGraph;
    use crate::markings::tests::intro_marking;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn figure_eight_product() {
        let f8 = Marking::standard(&WeightedGraph::rose(2));
        let a = NielsenAuto::new(vec![NielsenMove::Mul(0, 1)]);
        let out = apply_auto(&f8, &a).unwrap();
        assert_eq!(out.render(), vec!["a b", "b"]);
        assert_eq!(out.h1_matrix(), IntMatrix::from_i64(&[vec![1, 1], vec![0, 1]]));
        assert_eq!(apply_auto(&f8, &NielsenAuto::identity()).unwrap(), f8);
    }

    #[test]
    fn inversion_on_intro() {
        let out = apply_auto(&intro_marking(), &NielsenAuto::new(vec![NielsenMove::Invert(0)])).unwrap();
        assert_eq!(out.render()[0], "b- a");
    }

    #[test]
    fn invalid_moves() {
        assert!(NielsenAuto::new(vec![NielsenMove::Mul(1, 1)]).images(2).is_err());
        assert!(NielsenAuto::new(vec![NielsenMove::Swap(0, 2)]).images(2).is_err());
    }

    #[test]
    fn abelianization_tracks_h1() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = intro_marking();
        for _ in 0..30 {
            let a = NielsenAuto::random(3, 6, &mut rng);
            let b = NielsenAuto::random(3, 4, &mut rng);
            let ab = a.abelianization(3).unwrap();
            let out = apply_auto(&m, &a).unwrap();
            assert_eq!(out.h1_matrix(), ab.mul(&m.h1_matrix()));
            let twice = apply_auto(&out, &b).unwrap();
            assert_eq!(twice, apply_auto(&m, &a.then(&b)).unwrap());
            assert_eq!(a.then(&b).abelianization(3).unwrap(), b.abelianization(3).unwrap().mul(&ab));
        }
    }

    #[test]
    fn serde_shape() {
        let a = NielsenAuto::new(vec![NielsenMove::Mul(0, 1), NielsenMove::Invert(1)]);
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"[{"mul":[0,1]},{"invert":1}]"#);
    }
}
