//! The book's chapters as doctests, so `cargo test` runs every snippet.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/moduli.md")]
pub mod moduli {}
#[doc = include_str!("../../../book/src/markings.md")]
pub mod markings {}
#[doc = include_str!("../../../book/src/period.md")]
pub mod period {}
#[doc = include_str!("../../../book/src/voronoi.md")]
pub mod voronoi {}
#[doc = include_str!("../../../book/src/quotients.md")]
pub mod quotients {}
#[doc = include_str!("../../../book/src/compatibility.md")]
pub mod compatibility {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
