//! Birkhoff and root subgroup factorization for `SU(n)` and `SU(p,q)`,
//! with numerical checks of the Haar measure formula in these coordinates.

pub mod error;
pub mod factor;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod realize;
pub mod rootsys;
pub mod rsf;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
