pub mod cli;
pub mod error;
pub mod exact;
pub mod freegroup;
pub mod linalg;
pub mod ncpoly;
pub mod ncrank;
pub mod randmat;
pub mod ratexpr;
pub mod realization;
pub mod scalar;
pub mod spectra;

pub use error::{Error, Result};
pub use exact::ExactMatrix;
pub use ncpoly::{LinearPencil, NcMatrix, NcPoly};
pub use scalar::ExactScalar;
