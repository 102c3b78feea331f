//! Boundary quantum statistical mechanical systems of finite multigraphs.

pub mod boundary_measure;
pub mod classify;
pub mod corpus;
pub mod covering_tree;
pub mod error;
pub mod ktheory;
pub mod multigraph;
pub mod nonbacktracking;
pub mod qsm;

pub use error::{Error, Result};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs-and-k-theory.md")]
    mod graphs_and_k_theory {}
    #[doc = include_str!("../../../book/src/non-backtracking.md")]
    mod non_backtracking {}
    #[doc = include_str!("../../../book/src/covering-tree.md")]
    mod covering_tree {}
    #[doc = include_str!("../../../book/src/boundary-measure.md")]
    mod boundary_measure {}
    #[doc = include_str!("../../../book/src/crossed-product.md")]
    mod crossed_product {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
}
