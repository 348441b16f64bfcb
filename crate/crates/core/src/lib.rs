//! Numerical workbench for finite quantum groups: finite-dimensional Hopf C*-algebras with
//! tracial Haar state, their duals, Fourier transform and convolution, multiplicative
//! unitaries, and the classification of bi-inner Hopf *-automorphisms.

// `!(x > tol)` is used on purpose so that NaN fails invertibility and positivity tests.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod biinner;
pub mod dual;
pub mod error;
pub mod groups;
pub mod hopf;
pub mod linalg;
pub mod morphisms;
pub mod mult_unitary;
pub mod random;
pub mod tolerance;
pub mod wedderburn;

pub use algebra::{BlockAlgebra, Element, ElementJson};
pub use error::{Error, Result};
pub use random::Sampler;
pub use tolerance::ToleranceConfig;
