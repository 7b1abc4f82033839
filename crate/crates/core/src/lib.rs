pub mod coulomb;
pub mod error;
pub mod orthopoly;
pub mod painleve;
pub mod precision;
pub mod relations;

pub use error::{Error, Result};
pub use precision::{BigReal, PrecisionContext};
