//! Voronoi reduction theory of positive (semi)definite forms.
//!
//! Symmetric matrices are handled in upper-triangle coordinates, so at
//! `g = 2` the rank one forms of `e1 - e2`, `e1`, `e2` are
//! `R12 = (1, -1, 1)`, `R13 = (1, 0, 0)` and `R23 = (0, 0, 1)`.

mod admissible;
mod delone;
mod equiv;
mod minvec;
mod reduce;
mod secondary;

pub use admissible::{check_admissible_axioms, AdmissibleReport, StabilityRecord};
pub use delone::{delone, DeloneCell, DeloneFacet, DeloneSubdivision, MAX_BOX_RADIUS};
pub use equiv::gl_equivalent;
pub use minvec::{is_perfect, min_vectors, minimal_vectors_up_to_sign, perfect_cone, short_vectors, MinVecSet};
pub use reduce::{binary_normal_form, in_principal_cone, reduce_binary};
pub use secondary::{
    functional_value, secondary_cone, secondary_cone_of_form, transform_cone, transform_rays, SecondaryCone,
};
