//! Exact arithmetic in F_p, F_p[T], F_p(T), residue fields, and the
//! expansion at the infinite place.

pub mod fp;
pub mod poly;
pub mod rational;
pub mod residue;

pub use fp::PrimeModulus;
pub use poly::{enumerate_below, enumerate_monic, monic_irreducibles, Poly};
pub use rational::RationalFunction;
pub use residue::ResidueField;
