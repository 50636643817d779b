//! Exact arbitrary-precision rational arithmetic and weighted-graded sparse
//! multivariate polynomials, generic over the coefficient domain.
//!
//! Everything here is immutable after construction; all operations are pure.

mod coeff;
mod vartable;
mod wpoly;

pub use coeff::{rat, rat_int, rational_to_f64, Coeff, Rational};
pub use vartable::VarTable;
pub use wpoly::{polarize, Expo, WPoly};
