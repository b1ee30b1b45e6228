//! Finite nerves, cochains and their cohomology.

pub mod coeff;
pub mod cochain;
pub mod cohomology;
pub mod complex;
pub mod nerve;
pub mod snf;

pub use cochain::{coboundary, cup_product, pullback, Cochain, CochainJson};
pub use coeff::{CoeffValue, CoefficientGroup, RCxValue};
pub use cohomology::{cohomology, complex_cohomology, kernel_basis, solve_integer, AbelianGroupPresentation, Summand};
pub use complex::CochainComplex;
pub use nerve::{models, CoverNerve, NerveJson};
pub use snf::{smith_normal_form, IntMatrix, Snf};
