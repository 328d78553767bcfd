//! Rationals travel as strings `"p/q"` (or `"p"` for integers); matrices as
//! row-major arrays of such strings. Integers are also accepted as bare JSON
//! numbers on input.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{IntMatrix, RatMatrix};
use super::Rat;
use crate::{Error, Result};

pub fn rat_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rat::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Str(String),
}

impl Scalar {
    fn to_rat(&self) -> Result<Rat> {
        match self {
            Scalar::Int(n) => Ok(Rat::from_integer(BigInt::from(*n))),
            Scalar::Str(s) => parse_rat(s),
        }
    }
}

fn rows_to_matrix<T: Clone + Zero, E: serde::de::Error>(rows: Vec<Vec<T>>) -> std::result::Result<super::Matrix<T>, E> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(E::custom("ragged matrix rows"));
    }
    Ok(super::Matrix::from_rows(rows, cols))
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows()).map(|i| self.row(i).iter().map(rat_string).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<Vec<Scalar>> = Vec::deserialize(d)?;
        let rows = raw
            .iter()
            .map(|r| r.iter().map(Scalar::to_rat).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        rows_to_matrix(rows)
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows()).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = RatMatrix::deserialize(d)?;
        m.to_int().ok_or_else(|| D::Error::custom("expected integer entries"))
    }
}

/// Serde helper for a single rational as a string.
pub mod rat_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        rat_string(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        Scalar::deserialize(d)?.to_rat().map_err(D::Error::custom)
    }
}

/// Serde helper for a vector of rationals as strings.
pub mod rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(rat_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let raw: Vec<Scalar> = Vec::deserialize(d)?;
        raw.iter().map(Scalar::to_rat).collect::<Result<Vec<_>>>().map_err(D::Error::custom)
    }
}

/// Serde helper for one integer vector as decimal strings.
pub mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
        let raw: Vec<Scalar> = Vec::deserialize(d)?;
        raw.iter()
            .map(|x| {
                let q = x.to_rat()?;
                if q.is_integer() {
                    Ok(q.to_integer())
                } else {
                    Err(Error::Parse("expected an integer".into()))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)
    }
}

/// Serde helper for integer vectors as decimal strings.
pub mod int_vecs {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<BigInt>>, D::Error> {
        let raw: Vec<Vec<Scalar>> = Vec::deserialize(d)?;
        raw.iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        let q = x.to_rat()?;
                        if q.is_integer() {
                            Ok(q.to_integer())
                        } else {
                            Err(Error::Parse("expected an integer".into()))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::rat;

    #[test]
    fn strings() {
        assert_eq!(rat_string(&rat(3, 1)), "3");
        assert_eq!(rat_string(&rat(-2, 4)), "-1/2");
        assert_eq!(parse_rat(" 6/-4 ").unwrap(), rat(-3, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let m = RatMatrix::new(2, 2, vec![rat(1, 1), rat(1, 2), rat(1, 2), rat(1, 1)]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["1","1/2"],["1/2","1"]]"#);
        let back: RatMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let mixed: RatMatrix = serde_json::from_str(r#"[[2, "-1"], [-1, 2]]"#).unwrap();
        assert_eq!(mixed, RatMatrix::from_i64(&[vec![2, -1], vec![-1, 2]]));
    }
}
