//! Dubrovin threefolds of algebraic curves.
//!
//! The threefold `D_C` of a genus-g curve `C` lives in the weighted projective
//! space `WP^{3g-1}` with coordinates `(U, V, W)` of weights `(1, 2, 3)`. Its
//! points encode solutions `u = 2 (log tau)_xx + c` of the KP equation, with
//! `tau(x,y,t) = theta(Ux + Vy + Wt + D | B)`.
//!
//! The crate has two faces:
//!
//! * an exact side (`exactalg`, `curvefield`, `param`, `ideal`) working over
//!   arbitrary-precision rationals: parametrizations of `D_C` from a plane
//!   curve, membership checks and graded implicitization of its ideal, and
//!   the toric-degeneration machinery (polarizations, initial forms);
//! * a numeric side (`theta`, `hirota`, `schottky`, `degenerate`) working in
//!   complex double precision: Riemann theta functions and their derivative
//!   tensors, Hirota/Dubrovin quartics, KP residuals, and curve recovery
//!   from theta constants.
//!
//! With the default `parallel` feature the numeric hot loops (lattice sums,
//! grid evaluation, matrix assembly) run on rayon; without it everything is
//! sequential. Reductions are ordered either way, so results are bit-stable
//! across both modes.

pub mod curvefield;
pub mod degenerate;
pub mod error;
pub mod exactalg;
pub mod hirota;
pub mod ideal;
pub mod io;
pub mod linalg;
pub mod param;
pub mod schottky;
pub mod theta;

mod util;

pub use error::DubrovinError;
pub use util::SplitMix64;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, DubrovinError>;
