//! Exact lattice, modular-group and Picard–Fuchs computations for K3
//! surfaces of Picard rank one and their mirror families.

pub mod arith;
pub mod cli;
pub mod discriminant;
pub mod error;
pub mod lattice;
pub mod modular;
pub mod monodromy;
pub mod picard_fuchs;
pub mod series;
pub mod mukai;

pub use error::{Error, Result};
