//! Symmetric logarithmic derivatives from the metric Lyapunov equation
//! `2D⁽μ⁾ = L⁽μ⁾·S·R + R·S·L⁽μ⁾`.

use super::model::ModelMatrices;
use crate::error::{Error, Result};
use crate::linalg::{self, re, CMatrix};
use crate::scalar::{lit, tol, Real};

/// SLD coefficient matrices with per-parameter diagnostics.
#[derive(Debug, Clone)]
pub struct SldSolution<T: Real> {
    pub l: Vec<CMatrix<T>>,
    /// `‖L⁽μ⁾SR + RSL⁽μ⁾ − 2D⁽μ⁾‖` of the returned (Hermitized) matrices.
    pub residuals: Vec<T>,
    /// Dimension of the numerical kernel of the Lyapunov operator; nonzero
    /// when the SLD is not unique.
    pub rank_deficiencies: Vec<usize>,
}

/// `‖L·S·R + R·S·L − 2D‖`.
pub fn sld_residual<T: Real>(model: &ModelMatrices<T>, l: &CMatrix<T>, d: &CMatrix<T>) -> T {
    let sr = &model.s * &model.r;
    let rs = &model.r * &model.s;
    linalg::sylvester_residual(&sr, &rs, &(d * re(lit::<T>(2.0))), l)
}

/// Largest residual accepted as a solution of the Lyapunov equation.
pub(crate) fn residual_limit<T: Real>(d: &CMatrix<T>) -> T {
    tol::<T>(1e-8) * T::one().max(linalg::norm(d))
}

/// Solves for every `L⁽μ⁾` in the minimum-norm least-squares sense and
/// Hermitizes the result.
pub fn solve_slds<T: Real>(model: &ModelMatrices<T>, rank_tol: T) -> Result<SldSolution<T>> {
    model.check_invariants()?;
    let sr = &model.s * &model.r;
    let rs = &model.r * &model.s;
    let two = re(lit::<T>(2.0));
    let mut out = SldSolution {
        l: vec![],
        residuals: vec![],
        rank_deficiencies: vec![],
    };
    for (name, d) in model.parameter_names.iter().zip(&model.d) {
        let sol = linalg::lyapunov_lstsq(&sr, &rs, &(d * two), rank_tol)?;
        let l = linalg::hermitize(&sol.x);
        let residual = linalg::sylvester_residual(&sr, &rs, &(d * two), &l);
        if !(residual <= residual_limit(d)) {
            return Err(Error::SolverFailure {
                parameter: name.clone(),
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
        out.l.push(l);
        out.residuals.push(residual);
        out.rank_deficiencies.push(sol.rank_deficiency);
    }
    Ok(out)
}
