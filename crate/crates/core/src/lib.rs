//! Quantum Fisher information of states expanded on non-orthogonal bases.
//!
//! A model is given by coefficient matrices `(R, S, {D⁽μ⁾})` on a basis of
//! kets with known scalar products. SLDs, the QFI matrix and the
//! mean-commutator matrix are obtained from Lyapunov-type equations in the
//! Gramian metric `S`, without orthonormalizing the basis.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cat;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod validation;

pub use error::{Error, Result};
pub use scalar::Real;

pub type CMatrix64 = linalg::CMatrix<f64>;
pub type CMatrix32 = linalg::CMatrix<f32>;
pub type ModelMatrices64 = engine::ModelMatrices<f64>;
pub type ModelMatrices32 = engine::ModelMatrices<f32>;
pub type QfiResult64 = engine::QfiResult<f64>;
pub type QfiResult32 = engine::QfiResult<f32>;
pub type SldSolution64 = engine::SldSolution<f64>;
pub type SldSolution32 = engine::SldSolution<f32>;
pub type CatConfig64 = cat::CatConfig<f64>;
pub type CatConfig32 = cat::CatConfig<f32>;
