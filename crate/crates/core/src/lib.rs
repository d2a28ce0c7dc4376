//! Numerical toolkit for quantizing Yang–Mills theory on a spacetime
//! cylinder by reduction.
//!
//! The structure group is U(1) or SU(2). Connections on the spatial circle
//! are discretized on `N` sites; their holonomy lands in the group, and
//! gauge-invariant functions are functions of the holonomy. On top of that
//! the crate provides heat kernels and characters on the group, the
//! Euclidean Segal–Bargmann transform, coherent states on the group, the
//! classical free dynamics, and a set of numerical checks tying them
//! together.
//!
//! The group, spectral and quadrature layers are generic over [`Real`]
//! (`f32` or `f64`); the lattice Monte Carlo layers run in `f64`. The type
//! aliases below fix the scalar to `f64`.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// `Real` does not require the assign operators.
#![allow(clippy::assign_op_pattern)]

pub mod classical;
pub mod coherent;
pub mod error;
pub mod euclid;
pub mod group;
pub mod lattice;
pub mod mc;
pub mod quadrature;
pub mod reduction;
pub mod report;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use group::GroupKind;
pub use mc::{MCEstimate, MonteCarlo};
pub use scalar::Real;

pub type AlgebraVector = group::AlgebraVector<f64>;
pub type GroupElement = group::GroupElement<f64>;
pub type ComplexGroupElement = group::ComplexGroupElement<f64>;
pub type PolarCoordinates = group::PolarCoordinates<f64>;
pub type Mat2 = group::Mat2<f64>;
pub type CharacterSeries = spectral::CharacterSeries<f64>;

