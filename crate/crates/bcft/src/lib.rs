//! Operad calculus for boundary conformal field theory operator product
//! expansions.
//!
//! * [`trees`]: labeled binary trees, the magma operad and its 2-colored
//!   extension, doubling.
//! * [`coords`]: tree-adapted coordinates and convergence-region certificates.
//! * [`series`]: truncated generalized power series and the expansion map.
//! * [`braids`]: braid words, cabling, and parenthesized (colored) braids.
//! * [`latticecft`]: the free-boson lattice model and its consistency checks.
//! * [`cli`]: the command-line front end.

pub mod braids;
pub mod cli;
pub mod coords;
pub mod latticecft;
pub mod series;
pub mod trees;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/coords.md")]
    mod coords {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/braids.md")]
    mod braids {}
    #[doc = include_str!("../../../book/src/latticecft.md")]
    mod latticecft {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
