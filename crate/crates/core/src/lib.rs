//! Loci of common points of two sphere families drawn through the vertices of
//! two fixed simplexes, under a fixed intersection-angle constraint.

pub mod det;
pub mod error;
pub mod export;
pub mod extract;
pub mod geometry;
pub mod classify;
pub mod cli;
pub mod config;
pub mod locus;
pub mod oracle;
pub mod pseudo;

pub use error::{Error, Result};
