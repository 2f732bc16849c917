pub mod algebra;
pub mod cohomology;
pub mod error;
pub mod json;
pub mod loop_orbit;
pub mod pencil;
pub mod poisson;

pub use error::{Error, Result};
