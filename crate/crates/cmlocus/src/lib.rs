//! Exact computations on the deformation locus of a supersingular curve with
//! a CM order: Frobenius-twisted lifting recursions over truncated Witt
//! frames, lengths of Artinian quotients by chain-ring elimination, the
//! combinatorics of components and intersection numbers, and Dieudonne
//! lattice enumeration.

pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod lattice;
pub mod length;
pub mod padic;
pub mod report;
pub mod series;
pub mod window;

pub use error::{Error, Result};
