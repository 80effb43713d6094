//! Exact volumes, lattice-point counts and Kostant partition functions of
//! flow polytopes, computed through iterated residues.

pub mod chambers;
pub mod error;
pub mod factor;
pub mod identities;
pub mod kostant;
pub mod linalg;
pub mod morris;
pub mod poly;
pub mod residue;
pub mod suites;
pub mod system;
pub mod volume;

pub use error::{Error, Result};
