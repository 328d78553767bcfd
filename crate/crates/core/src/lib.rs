//! Exact computational tropical Teichmüller and Siegel theory.
//!
//! The crate covers the combinatorial objects behind the tropical period and
//! Torelli maps, all over exact rational arithmetic:
//!
//! * [`ratlin`]: rational and integer matrices, quadratic forms, Hermite and
//!   Smith normal forms.
//! * [`graphs`]: stable weighted multigraphs, contraction, canonical forms,
//!   automorphisms and cycle bases.
//! * [`moduli`]: the catalogue of stable graphs of genus `g` and the moduli
//!   stacky fan glued from their orthants.
//! * [`markings`]: markings by petal edge-paths, Stallings folding, Nielsen
//!   moves, specialization and equivalence.
//! * [`stackyfan`]: ideal cones, lattice-preserving maps, stacky fans and
//!   stratified quotients.
//! * [`voronoi`]: minimal vectors, perfect cones, Delone subdivisions and
//!   secondary cones.
//! * [`torelli`]: tropical Jacobians, the period map on cells and
//!   compatibility with the perfect and second Voronoi decompositions.
//!
//! ```
//! use tropical_torelli::graphs::WeightedGraph;
//! use tropical_torelli::torelli::jacobian;
//! use tropical_torelli::ratlin::rat;
//!
//! let theta = WeightedGraph::new(vec![0, 0], vec![(0, 1), (0, 1), (0, 1)]).unwrap();
//! let jac = jacobian(&theta, &[rat(1, 1), rat(2, 1), rat(3, 1)]).unwrap();
//! assert_eq!(jac.block_form.to_string(), "[[3, 1], [1, 4]]");
//! ```

pub mod error;
pub mod graphs;
pub mod markings;
pub mod moduli;
pub mod ratlin;
pub mod stackyfan;
pub mod torelli;
pub mod voronoi;

pub use error::{Error, Result};
