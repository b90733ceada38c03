pub mod chain;
pub mod cli;
pub mod effective;
pub mod error;
pub mod exact;
pub mod ket;
pub mod linalg;
pub mod observables;
pub mod profile;
pub mod propagate;
pub mod scenarios;
pub mod sector;
pub mod sparse;

pub use error::{Error, Result};
