//! Co-Segal precategories over a small set of base categories.
//!
//! The core is `no_std` with `alloc`. All arithmetic is exact over the rationals.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod adjoints;
pub mod base;
pub mod error;
pub mod fixtures;
pub mod homotopy;
pub mod linalg;
pub mod monoidal;
pub mod precat;
pub mod shapes;

pub use error::{Error, Result};
