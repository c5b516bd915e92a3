//! Exact arithmetic for quadratic forms, quadratic characters and
//! hyperelliptic L-functions over F_p[T].

pub mod error;
pub mod field;

pub use error::{Error, Result};
pub use field::{Poly, PrimeModulus, RationalFunction, ResidueField};
pub mod symbols;
pub mod qform;
pub mod zeta;
pub mod spectral;
