//! Ideal cones, lattice-preserving maps, stacky fans and stratified
//! quotients.

mod cone;
pub mod dd;
mod fan;
mod io;
mod quotient;

pub use cone::{Face, IdealCone, Membership};
pub use fan::{validate_fan, Cell, FanReport, LatticeMap, StackyFan, Violation};
pub use io::{fan_to_dot, FanData};
pub use quotient::{
    cell_orbits, face_relation, is_fan_isomorphism, poset_isomorphism, quotient_point_bijection_check, representative_independence, stratified_quotient,
    stratified_quotient_with, BijectionReport, Generator, GroupAction, Quotient, DEFAULT_BUDGET,
};
