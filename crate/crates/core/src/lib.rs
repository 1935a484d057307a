//! Exact invariants of foliations on projective bundles, generalised cones
//! and weighted projective spaces.

mod error;

pub mod bundle;
pub mod catalog;
pub mod cli;
pub mod foliation;
pub mod lattice;
pub mod rank_one;
pub mod synthesis;
pub mod table;
pub mod variety;
pub mod verification;

pub use error::{Error, Result};
