//! Robin and Steklov eigenvalues of the radially weighted Laplacian
//! `-div(e^{h(|x|)} grad u) = lambda e^{h(|x|)} u`.
//!
//! Balls of any dimension are handled through radial ODEs ([`radial`]); origin-symmetric
//! planar domains through P1 finite elements ([`fem2d`]). The [`verify`] module compares the
//! two sides of the isoperimetric inequality for the second Robin eigenvalue and its
//! supporting monotonicity statements, and [`cli`] exposes everything on the command line.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fem2d;
pub mod linalg;
pub mod ode;
pub mod quadrature;
pub mod radial;
pub mod richardson;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use weights::{BallSpec, WeightProfile};
