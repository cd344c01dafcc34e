pub mod error;
pub mod exact;
pub mod experiments;
pub mod grid;
pub mod nonlinearity;
pub mod solver;
mod spectral;
pub mod virial;

pub use error::{Error, Result};
