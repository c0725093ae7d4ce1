//! Local Deligne data on covered, triangulated manifolds.
//!
//! The crate is organised bottom-up:
//!
//! * [`simplicial`]: simplices, chains, covers, subordination, subdivision and
//!   products with a circle.
//! * [`deligne`]: Čech–de Rham cochains `(g, ω¹, …, ωᵖ)`, cocycle checks,
//!   curvature and characteristic classes.
//! * [`holonomy`]: the local amplitude formula on subordinated cycles.
//! * [`transgression`]: integration over a circle factor and the finite-group
//!   transgressed character.
//! * [`multiplicative`]: finite groups, group cocycles, simplicial cocycle
//!   triples and Dijkgraaf–Witten state sums.
//! * [`chern_simons`]: matrix-valued connections, Chern–Weil forms and the
//!   Chern–Simons functional on periodic grids.
//!
//! Angles are additive: a `U(1)` element `exp(2πi·a)` is stored as `a mod 1`,
//! and imaginary-valued forms are stored divided by `2πi`, so integral classes
//! have integer periods.

pub mod chern_simons;
pub mod circle;
pub mod deligne;
pub mod error;
pub mod form;
pub mod holonomy;
pub mod multiplicative;
pub mod quadrature;
pub mod simplicial;
pub mod transgression;

pub use circle::CircleValue;
pub use error::{Error, Result};
pub use form::FormField;
