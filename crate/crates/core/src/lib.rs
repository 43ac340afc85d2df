//! Prioritised default bilattices and their dualities, computed exhaustively
//! at finite scale.

pub mod algebra;
pub mod duality;
pub mod error;
pub mod json;
pub mod kn;
pub mod lattice;
pub mod poset;
pub mod product;
pub mod verify;

pub use error::{Error, Result};
