pub mod algebra;
pub mod conservation;
pub mod em;
pub mod error;
pub mod matrix;
pub mod spectral;
pub mod verify;

#[cfg(doctest)]
mod book;

pub use error::{Error, Result};
