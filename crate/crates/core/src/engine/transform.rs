//! Index bookkeeping between bases: zero-padded embedding and the
//! braket ("tilde") representation `⟨ψ_k|A|ψ_l⟩ = (S·A·S)_kl`.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::scalar::Real;

/// Places `small` at rows/columns `index_map` of a `full_dim`-square zero
/// matrix.
pub fn embed_zero_padded<T: Real>(
    small: &CMatrix<T>,
    index_map: &[usize],
    full_dim: usize,
) -> Result<CMatrix<T>> {
    if !small.is_square() || small.nrows() != index_map.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} block with {} target positions",
            small.nrows(),
            small.ncols(),
            index_map.len()
        )));
    }
    for (k, &i) in index_map.iter().enumerate() {
        if i >= full_dim {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: full_dim,
            });
        }
        if index_map[..k].contains(&i) {
            return Err(Error::InvalidConfig(format!("position {i} mapped twice")));
        }
    }
    let mut out = CMatrix::zeros(full_dim, full_dim);
    for (a, &i) in index_map.iter().enumerate() {
        for (b, &j) in index_map.iter().enumerate() {
            out[(i, j)] = small[(a, b)];
        }
    }
    Ok(out)
}

fn conformable<T: Real>(a: &CMatrix<T>, s: &CMatrix<T>) -> Result<()> {
    if a.is_square() && s.is_square() && a.nrows() == s.nrows() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{:?} against metric {:?}",
            a.shape(),
            s.shape()
        )))
    }
}

/// Coefficients → brakets: `Ã = S·A·S`.
pub fn to_tilde<T: Real>(a: &CMatrix<T>, s: &CMatrix<T>) -> Result<CMatrix<T>> {
    conformable(a, s)?;
    Ok(s * a * s)
}

/// Brakets → coefficients: `A = S⁻¹·Ã·S⁻¹`.
pub fn from_tilde<T: Real>(
    a_tilde: &CMatrix<T>,
    s: &CMatrix<T>,
    cond_cap: T,
) -> Result<CMatrix<T>> {
    conformable(a_tilde, s)?;
    let s_inv = linalg::metric_inverse(s, cond_cap)?;
    Ok(&s_inv * a_tilde * &s_inv)
}

/// Coefficient matrix of the operator product `A·B`: `A·S·B`.
pub fn operator_product<T: Real>(a: &CMatrix<T>, s: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a * s * b
}

/// `Tr[ρ A]` as `Tr[R·S·A·S]`.
pub fn expectation<T: Real>(
    r: &CMatrix<T>,
    s: &CMatrix<T>,
    a: &CMatrix<T>,
) -> nalgebra::Complex<T> {
    linalg::trace(&(r * s * a * s))
}
