//! Binary self-dual codes with a dihedral automorphism group: construction,
//! weight analysis, shadow bounds and a parameter search.

pub mod analysis;
pub mod cyclic_field;
pub mod decomposition;
pub mod error;
pub mod gf2;
pub mod search;
mod numtheory;
pub mod shadow_theory;

pub use error::{Error, Result};
