//! Metrology on non-orthogonal bases: the Gramian is the metric that
//! contracts indices, so the SLD equation becomes a matrix Lyapunov
//! equation and the QFI a trace of coefficient matrices.

pub mod basis;
pub mod model;
pub mod qfi;
pub mod sld;
pub mod transform;

pub use basis::{build_basis, gramian, BasisDescriptor, BasisSet, ExplicitKet, Ket};
pub use model::{finite_difference_derivatives, ModelMatrices};
pub use qfi::{qfi_gamma, reparameterize, scalar_qcrb, sld_products, QfiResult, WeightedBound};
pub use sld::{sld_residual, solve_slds, SldSolution};
pub use transform::{embed_zero_padded, expectation, from_tilde, operator_product, to_tilde};

use crate::error::Result;
use crate::scalar::Real;

/// Solves the SLDs and evaluates `H` and `Γ` in one go.
pub fn evaluate<T: Real>(
    model: &ModelMatrices<T>,
    rank_tol: T,
) -> Result<(QfiResult<T>, SldSolution<T>)> {
    let slds = solve_slds(model, rank_tol)?;
    Ok((qfi_gamma(model, &slds)?, slds))
}
