use serde::{Deserialize, Serialize};

use super::jacobian::jacobian;
use crate::graphs::WeightedGraph;
use crate::ratlin::{rat_str, split_off_null, QuadForm, Rat};
use crate::voronoi::{binary_normal_form, delone, secondary_cone};
use crate::Result;

/// Tag of the `GL_g(Z)`-class of a Jacobian, computed from its definite
/// block. Exact up to rank two; for rank three and more only the
/// combinatorial type of the Delone subdivision is recorded.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassTag {
    Zero,
    Unary {
        #[serde(with = "rat_str")]
        value: Rat,
    },
    Binary { normal_form: QuadForm },
    Delone { cells: Vec<usize>, secondary_dim: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorelliClass {
    pub jacobian: QuadForm,
    pub definite_block: QuadForm,
    pub tag: ClassTag,
}

/// Jacobian of a tropical curve together with a tag of its isomorphism
/// class as a principally polarized tropical abelian variety.
pub fn torelli_class(g: &WeightedGraph, lengths: &[Rat]) -> Result<TorelliClass> {
    let j = jacobian(g, lengths)?;
    let (_, block) = split_off_null(&j.block_form)?;
    let tag = match block.g() {
        0 => ClassTag::Zero,
        1 => ClassTag::Unary { value: block.get(0, 0).clone() },
        2 => ClassTag::Binary { normal_form: binary_normal_form(&block)?.1 },
        _ => {
            let d = delone(&block)?;
            ClassTag::Delone { cells: d.shape(), secondary_dim: secondary_cone(&d)?.cone().dim() }
        }
    };
    Ok(TorelliClass { jacobian: j.block_form, definite_block: block, tag })
}
