pub mod error;
pub mod classes;
pub mod combinatorics;
pub mod cycles;
pub mod exact;
pub mod local_models;
pub mod syntax;
pub mod trees;
pub mod verify;

pub use error::{Error, Result};
pub use exact::Rational;
