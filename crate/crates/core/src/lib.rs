//! Pointwise curvature algebra for submanifolds of real space forms.
//!
//! Starting from the shape operators of a submanifold at one point, this
//! crate builds the Riemann, Ricci, Weyl and normal curvature tensors, the
//! derivations `R·T` and `C·T`, the Tachibana tensors `Q(A,T)`, and decides
//! linear dependence between them. Everything is generic over [`Scalar`], so
//! the same code runs in exact rational arithmetic or in `f64`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod classify;
pub mod crosscheck;
pub mod curvature;
pub mod derivations;
pub mod error;
pub mod expr;
pub mod grid;
pub mod scalar;
pub mod sectional;
pub mod tables;
pub mod tensor;
pub mod wintgen;

pub use error::Error;
pub use scalar::{q, ExactOrFloat, Rational, Scalar};
pub use tensor::{SymMatrix, Tensor};
pub use wintgen::ChoiLuParams;
