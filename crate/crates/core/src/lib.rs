//! Exact K-theoretic machinery for exceptional bundle systems on Del Pezzo
//! surfaces, and a brute-force stability oracle for Kronecker modules.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`] models a surface by its Picard lattice and canonical class,
//!   and evaluates the Euler form on Mukai vectors `(r, c1, s)`.
//! * [`quadratic`] is exact arithmetic in `Q(sqrt(D))`, used for the limit
//!   slopes of a system.
//! * [`mutation`] types exceptional pairs and computes mutations on classes.
//! * [`system`] generates the doubly infinite system of a pair on a window
//!   and classifies it.
//! * [`moduli`] checks the hypotheses of the Kronecker moduli comparison
//!   for a full collection and a candidate vector.
//! * [`kronecker`] implements Kronecker modules over finite fields and the
//!   rationals, with an exhaustive subspace stability checker.
//!
//! Everything outside [`kronecker`]'s float-free rank routines is exact:
//! integers are arbitrary precision and rationals are always reduced.

// index loops read better in the elimination routines
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod kronecker;
pub mod lattice;
pub mod moduli;
pub mod mutation;
pub mod quadratic;
pub mod system;

pub use error::{Error, Result};
pub use lattice::{MukaiVector, PicClass, SurfaceModel, SurfacePreset};
pub use mutation::{MutationKind, PairType, Side};
pub use quadratic::QuadraticNumber;
pub use system::{PairSystem, SystemType};

/// Reduced arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
