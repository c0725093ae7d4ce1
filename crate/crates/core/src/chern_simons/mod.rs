//! Connections on trivialized `U(N)` bundles over tori and sphere products,
//! their Chern–Weil forms and the Chern–Simons functional.
//!
//! A connection is a matrix-valued 1-form `A = Σ A_μ dx^μ` with anti-Hermitian
//! coefficients. Curvature is `F = dA + A ∧ A`, and the characteristic form is
//! `Φ((i/2π)F)` for the trace-square polynomial `Φ(X) = (k/2)·tr(X²)`.
//!
//! Integrals over closed domains use tensor-product rules: the periodic
//! trapezoid rule on torus axes and Gauss–Legendre on polar angles.
//!
//! The Chern–Simons functional comes in two conventions ([`CsConvention`]).
//! The default is the integral of the path form [`cs_form_path`]; on pure
//! gauge connections it equals `deg(g)` (see [`PURE_GAUGE_RATIO`]).

mod cfield;
mod connection;
mod domain;
mod functional;
mod gauge;
pub mod json;
mod matrix;

pub use cfield::{
    cfield_act, cfield_equivalence_check, coordinate_cycles, integrate_over_cycle, CField, CFieldEntry, CFieldReport, GaugeElement, TestCycle,
};
pub use connection::{constant_su2, fourier_connection, monopole, monopole_pair, random_abelian, random_su2, FourierMode, LatticeConnection};
pub use domain::{pairwise_sum, Axis, GridDomain};
pub use functional::{
    chern_weil_4form, cs_explicit, cs_form_path, cs_path_integral, cs_unit, gauge_shift_check, integrate_top_form, relative_cs, CsConvention,
    CsOptions, GaugeShiftReport, InvariantPolynomial, CURVATURE_NORMALIZATION, DEFAULT_GRID, LITERAL_PURE_GAUGE_RATIO, PURE_GAUGE_RATIO,
};
pub use gauge::{abelian_winding, bump_degree, gauge_transform, GaugeTransformation};
pub use matrix::{pauli, su2, su2_coordinates, su2_exp, Mat, MatrixForm};
