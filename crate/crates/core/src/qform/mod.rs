//! Ternary quadratic forms over F_p[T]: representations, isometries,
//! genera, local densities and the mass formula.

pub mod density;
pub mod diag;
pub mod enumerate;
pub mod example;
pub mod form;
pub mod genus;
pub mod isometry;
pub mod lattice;
pub mod mass;

pub use diag::{InftyDiagonalization, SquareClass};
pub use enumerate::{representation_count, representations, theta_series, RepSet, ThetaSeries};
pub use form::{TernaryForm, Vec3};
pub use isometry::{automorphism_count, is_isometric, reduce};
pub use genus::{compare_genus, genus_enumerate, neighbors, same_genus, Completeness, GenusSet};
pub use density::{local_density, DensityFactor, DensityMethod};
pub use mass::{genus_rep_count, local_obstruction_check, residual_scan, siegel_ratio_scan, GenusTheta};
pub use example::{example_q1, example_q2, run_example, ExampleReport};
