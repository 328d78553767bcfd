//! Tropical Jacobians, the period map and the Torelli map.
//!
//! Petals are rows: a marking with abelianized petals `B` (one column per
//! edge) has period matrix `B diag(l) B^T`, and a Nielsen automorphism with
//! abelianization `A` changes it to `A Q A^T`.

mod class;
mod compat;
mod jacobian;
mod period;

pub use class::{torelli_class, ClassTag, TorelliClass};
pub use compat::{compat_check, compat_check_genus, perfect_cell_g2, CellCompat, CompatReport, Sigma};
pub use jacobian::{jacobian, marked_period, TropicalJacobian};
pub use period::{period_on_cell, PeriodMatrixMap};
