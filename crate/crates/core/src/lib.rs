//! Exact computations linking integral bordism of PDEs with crystallographic
//! groups: finitely generated abelian groups, finite matrix groups and their
//! cohomology, crystallographic groups, bordism groups, jet-space symbols and
//! the crystal classification of PDEs.

pub mod abelian;
pub mod bordism;
pub mod cohomology;
pub mod crystal;
pub mod error;
pub mod groups;
pub mod jets;
pub mod pdeclass;
pub mod validate;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/abelian.md")]
    mod abelian {}
    #[doc = include_str!("../../../book/src/point-groups.md")]
    mod point_groups {}
    #[doc = include_str!("../../../book/src/cohomology.md")]
    mod cohomology {}
    #[doc = include_str!("../../../book/src/crystallographic-groups.md")]
    mod crystallographic_groups {}
    #[doc = include_str!("../../../book/src/bordism.md")]
    mod bordism {}
    #[doc = include_str!("../../../book/src/jets.md")]
    mod jets {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/tables.md")]
    mod tables {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
