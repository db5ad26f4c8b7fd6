//! QFI matrix, mean-commutator matrix Γ, Jacobian transport, and the
//! weighted (scalar) Cramér–Rao bound.

use nalgebra::{Complex, DMatrix};

use super::model::{combine, ModelMatrices};
use super::sld::{residual_limit, sld_residual, SldSolution};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::scalar::{lit, tol, Real};

/// `H` (real symmetric) and `Γ` (real antisymmetric) with the size of the
/// discarded numerical residue.
#[derive(Debug, Clone)]
pub struct QfiResult<T: Real> {
    pub h: DMatrix<T>,
    pub gamma: DMatrix<T>,
    /// Largest entry dropped when forcing `H` real-symmetric and `Γ`
    /// real-antisymmetric.
    pub imaginary_leakage: T,
}

impl<T: Real> QfiResult<T> {
    /// Splits the Hermitian matrix `T_μν = Tr[ρ L_μ L_ν] = H_μν + iΓ_μν`.
    pub fn from_products(t: &CMatrix<T>) -> Self {
        let n = t.nrows();
        let half = lit::<T>(0.5);
        let mut leak = T::zero();
        let mut h = DMatrix::zeros(n, n);
        let mut gamma = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (t[(i, j)], t[(j, i)]);
                h[(i, j)] = (a.re + b.re) * half;
                gamma[(i, j)] = (a.im - b.im) * half;
                leak = leak
                    .max(((a.re - b.re) * half).abs())
                    .max(((a.im + b.im) * half).abs());
            }
        }
        Self {
            h,
            gamma,
            imaginary_leakage: leak,
        }
    }
}

/// `T_μν = Tr[R·S·L⁽μ⁾·S·L⁽ν⁾·S]`.
pub fn sld_products<T: Real>(model: &ModelMatrices<T>, l: &[CMatrix<T>]) -> Result<CMatrix<T>> {
    let n = model.dim();
    if let Some(bad) = l.iter().find(|m| m.shape() != (n, n)) {
        return Err(Error::DimensionMismatch(format!(
            "SLD {:?} in dimension {n}",
            bad.shape()
        )));
    }
    let rs = &model.r * &model.s;
    let left: Vec<CMatrix<T>> = l.iter().map(|lm| &rs * lm * &model.s).collect();
    let right: Vec<CMatrix<T>> = l.iter().map(|ln| ln * &model.s).collect();
    Ok(CMatrix::from_fn(l.len(), l.len(), |mu, nu| {
        trace_of_product(&left[mu], &right[nu])
    }))
}

fn trace_of_product<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Complex<T> {
    a.row_iter()
        .zip(b.column_iter())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (row, col)| {
            acc + row.transpose().dot(&col)
        })
}

/// `H_μν + iΓ_μν = Tr[R·S·L⁽μ⁾·S·L⁽ν⁾·S]`.
pub fn qfi_gamma<T: Real>(model: &ModelMatrices<T>, slds: &SldSolution<T>) -> Result<QfiResult<T>> {
    if slds.l.len() != model.num_params() {
        return Err(Error::DimensionMismatch(format!(
            "{} SLDs for {} parameters",
            slds.l.len(),
            model.num_params()
        )));
    }
    Ok(QfiResult::from_products(&sld_products(model, &slds.l)?))
}

/// Transports QFI and SLDs to new parameters with `B_μν = ∂λ_ν/∂λ̃_μ`:
/// `H̃ = B·H·Bᵀ`, `L̃⁽μ⁾ = Σ_ν B_μν L⁽ν⁾`. Γ̃ is recomputed from the new SLDs.
pub fn reparameterize<T: Real>(
    model: &ModelMatrices<T>,
    qfi: &QfiResult<T>,
    slds: &SldSolution<T>,
    jacobian: &DMatrix<T>,
) -> Result<(QfiResult<T>, SldSolution<T>)> {
    let old = qfi.h.nrows();
    if jacobian.ncols() != old || slds.l.len() != old || model.num_params() != old {
        return Err(Error::DimensionMismatch(format!(
            "Jacobian {}x{} against {old} parameters",
            jacobian.nrows(),
            jacobian.ncols()
        )));
    }
    if jacobian.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let new = jacobian.nrows();
    let l: Vec<CMatrix<T>> = (0..new).map(|mu| combine(jacobian, mu, &slds.l)).collect();
    let d: Vec<CMatrix<T>> = (0..new).map(|mu| combine(jacobian, mu, &model.d)).collect();
    let residuals = l
        .iter()
        .zip(&d)
        .map(|(l, d)| sld_residual(model, l, d))
        .collect();
    let deficiency = slds.rank_deficiencies.iter().copied().max().unwrap_or(0);
    let transported = QfiResult::from_products(&sld_products(model, &l)?);
    let h = jacobian * &qfi.h * jacobian.transpose();
    let qfi = QfiResult { h, ..transported };
    Ok((
        qfi,
        SldSolution {
            l,
            residuals,
            rank_deficiencies: vec![deficiency; new],
        },
    ))
}

/// Scalar Cramér–Rao bound `Tr[G·H⁻¹]/M`.
#[derive(Debug, Clone)]
pub struct WeightedBound<T: Real> {
    pub weight: DMatrix<T>,
    pub copies: usize,
    pub bound: T,
}

fn real_sym_eig<T: Real>(m: &DMatrix<T>) -> Result<linalg::EigenPairs<T>> {
    let scale = T::one().max(m.norm());
    linalg::herm_eig(&linalg::complexify(m), tol::<T>(1e-10) * scale)
}

pub fn scalar_qcrb<T: Real>(
    h: &DMatrix<T>,
    weight: &DMatrix<T>,
    copies: usize,
    cond_cap: T,
) -> Result<WeightedBound<T>> {
    if !h.is_square() || weight.shape() != h.shape() {
        return Err(Error::DimensionMismatch(format!(
            "QFI {:?} with weight {:?}",
            h.shape(),
            weight.shape()
        )));
    }
    if copies == 0 {
        return Err(Error::InvalidConfig(
            "number of copies must be at least 1".into(),
        ));
    }
    let w_eig = real_sym_eig(weight).map_err(|_| Error::BadWeight)?;
    if w_eig.values.iter().any(|&v| v <= T::zero()) {
        return Err(Error::BadWeight);
    }
    let eig = real_sym_eig(h)?;
    let (lo, hi) = (eig.min(), eig.max());
    if !(lo > T::zero()) || hi / lo > cond_cap {
        let cond = if lo > T::zero() {
            (hi / lo).to_f64().unwrap_or(f64::INFINITY)
        } else {
            f64::INFINITY
        };
        return Err(Error::SingularQfi(cond));
    }
    let h_inv = eig.map_values(|v| T::one() / v).map(|z| z.re);
    let bound = (weight * h_inv).trace() / lit::<T>(copies as f64);
    Ok(WeightedBound {
        weight: weight.clone(),
        copies,
        bound,
    })
}

/// Largest residual allowed for `L⁽μ⁾` solving against `D⁽μ⁾`.
pub fn sld_is_valid<T: Real>(model: &ModelMatrices<T>, l: &CMatrix<T>, d: &CMatrix<T>) -> bool {
    sld_residual(model, l, d) <= residual_limit(d)
}
