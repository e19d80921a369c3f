//! Pointwise operator toolkit and solver for the Sp(1) Seiberg-Witten
//! equation on oriented 3-manifolds.
//!
//! The crate has three layers:
//!
//! * exact frame algebra: quaternionic representations, explicit Clifford
//!   multiplication, the moment map and its identities ([`quat`]);
//! * a differential-geometry engine on closed-form coordinate charts
//!   (Euclidean, Poincare ball, upper half-space, two circle products, flat
//!   3-torus) with interchangeable forward-mode and finite-difference
//!   differentiation backends ([`chart`]), on top of which the full operator
//!   stack of the equation is built ([`swop`]): Dirac operator, curvature,
//!   residuals, the gauge-fixed linearization and its square;
//! * solvers and reductions: a spectral residual minimizer on the flat
//!   3-torus ([`torus`]) and the circle-times-surface block reduction with an
//!   exhaustive solution scan ([`product`]).
//!
//! Verification suites covering all of it live in [`suites`] and are driven
//! by the `sp1sw` binary or directly by the runnable examples.

pub mod algebra;
pub mod chart;
pub mod config;
pub mod field;
pub mod product;
pub mod quat;
pub mod report;
pub mod scalar;
pub mod suites;
pub mod swop;
pub mod torus;

pub use algebra::{Mat3, Vec3, M3, V3};
pub use quat::{Quaternion, Spinor};
pub use scalar::{Jet, Scalar};
