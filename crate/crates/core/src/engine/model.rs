//! Matrix representation `(R, S, {D⁽μ⁾})` of a quantum statistical model.

use nalgebra::DMatrix;

use super::basis::{gramian_of, Ket};
use crate::error::{Error, Result};
use crate::linalg::{self, re, CMatrix};
use crate::scalar::{lit, tol, Real};

/// State, metric, and parameter derivatives in a (generally non-orthogonal)
/// basis: `ρ = Σ R_ij |ψ_i⟩⟨ψ_j|`, `S_ij = ⟨ψ_i|ψ_j⟩`,
/// `∂_μρ = Σ D⁽μ⁾_ij |ψ_i⟩⟨ψ_j|`.
#[derive(Debug, Clone)]
pub struct ModelMatrices<T: Real> {
    pub r: CMatrix<T>,
    pub s: CMatrix<T>,
    pub d: Vec<CMatrix<T>>,
    pub parameter_names: Vec<String>,
}

impl<T: Real> ModelMatrices<T> {
    /// Builds a model and checks every invariant.
    pub fn new(
        r: CMatrix<T>,
        s: CMatrix<T>,
        d: Vec<CMatrix<T>>,
        parameter_names: Vec<String>,
    ) -> Result<Self> {
        let model = Self {
            r,
            s,
            d,
            parameter_names,
        };
        model.check_invariants()?;
        Ok(model)
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn num_params(&self) -> usize {
        self.d.len()
    }

    pub fn check_invariants(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ModelInvariantViolation(msg));
        let n = self.s.nrows();
        if !self.s.is_square() || self.r.shape() != (n, n) {
            return bad(format!(
                "R is {:?} but S is {:?}",
                self.r.shape(),
                self.s.shape()
            ));
        }
        if self.parameter_names.len() != self.d.len() {
            return bad(format!(
                "{} parameter names for {} derivative matrices",
                self.parameter_names.len(),
                self.d.len()
            ));
        }
        linalg::ensure_finite(&self.r)?;
        linalg::ensure_finite(&self.s)?;
        let herm_tol = tol::<T>(1e-12);
        let scale = |m: &CMatrix<T>| T::one().max(linalg::norm(m));
        if linalg::hermitian_deviation(&self.s) > herm_tol * scale(&self.s) {
            return bad("S is not Hermitian".into());
        }
        if linalg::hermitian_deviation(&self.r) > herm_tol * scale(&self.r) {
            return bad("R is not Hermitian".into());
        }
        let root = linalg::psd_sqrt(&self.s, tol::<T>(1e-10) * scale(&self.s))?;
        let rho = &root * &self.r * &root;
        let eig = linalg::herm_eig(&linalg::hermitize(&rho), herm_tol * scale(&rho) * lit(10.0))?;
        if n > 0 && eig.min() < -tol::<T>(1e-10) {
            return bad(format!("state has negative eigenvalue {:e}", eig.min()));
        }
        let norm = linalg::trace(&(&self.r * &self.s));
        if (norm - re(T::one())).norm_sqr().sqrt() > tol::<T>(1e-10) {
            return bad(format!("Tr[R S] = {norm}, expected 1"));
        }
        for (name, d) in self.parameter_names.iter().zip(&self.d) {
            if d.shape() != (n, n) {
                return bad(format!("D[{name}] has shape {:?}", d.shape()));
            }
            linalg::ensure_finite(d)?;
            if linalg::hermitian_deviation(d) > herm_tol * scale(d) {
                return bad(format!("D[{name}] is not Hermitian"));
            }
            let tr = linalg::trace(&(d * &self.s));
            if tr.norm_sqr().sqrt() > tol::<T>(1e-10) * scale(d) {
                return bad(format!("Tr[D[{name}] S] = {tr}, expected 0"));
            }
        }
        Ok(())
    }

    /// The same model with its basis reordered: new index `k` is old index
    /// `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.dim();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} for dim {n}",
                perm.len()
            )));
        }
        for &p in perm {
            if p >= n {
                return Err(Error::IndexOutOfRange { index: p, dim: n });
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidConfig(format!(
                    "index {p} repeated in permutation"
                )));
            }
        }
        let apply = |m: &CMatrix<T>| CMatrix::from_fn(n, n, |i, j| m[(perm[i], perm[j])]);
        Ok(Self {
            r: apply(&self.r),
            s: apply(&self.s),
            d: self.d.iter().map(apply).collect(),
            parameter_names: self.parameter_names.clone(),
        })
    }

    /// Derivative matrices transported to new parameters through the
    /// Jacobian `B_μν = ∂λ_ν/∂λ̃_μ`.
    pub fn reparameterized(&self, jacobian: &DMatrix<T>, names: Vec<String>) -> Result<Self> {
        if jacobian.ncols() != self.num_params() || names.len() != jacobian.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "Jacobian {}x{} for {} old and {} new parameters",
                jacobian.nrows(),
                jacobian.ncols(),
                self.num_params(),
                names.len()
            )));
        }
        let d = (0..jacobian.nrows())
            .map(|mu| combine(jacobian, mu, &self.d))
            .collect();
        Ok(Self {
            r: self.r.clone(),
            s: self.s.clone(),
            d,
            parameter_names: names,
        })
    }
}

/// `Σ_ν B_μν M⁽ν⁾`.
pub(crate) fn combine<T: Real>(b: &DMatrix<T>, mu: usize, ms: &[CMatrix<T>]) -> CMatrix<T> {
    let n = ms.first().map_or(0, |m| m.nrows());
    ms.iter()
        .enumerate()
        .fold(CMatrix::zeros(n, n), |acc, (nu, m)| {
            acc + m * re(b[(mu, nu)])
        })
}

/// Derivative matrices by central differences when no analytic `D⁽μ⁾` is
/// available.
///
/// `state(λ)` returns the coefficient matrix of ρ(λ) together with the kets
/// it is expanded on (which may move with λ). Both perturbed states are
/// projected onto the fixed `reference` kets through the braket matrices
/// `⟨ψ_k|ρ|ψ_l⟩` and mapped back with `S⁻¹(·)S⁻¹`, which is exact whenever
/// `∂_μρ` lies in the span of the reference basis. The step for parameter
/// μ is `step_rel·max(1, |λ_μ|)`. Assumes `Tr ρ = 1` at `params`.
pub fn finite_difference_derivatives<T, K, F>(
    params: &[T],
    reference: &[K],
    state: F,
    step_rel: T,
    cond_cap: T,
) -> Result<Vec<CMatrix<T>>>
where
    T: Real,
    K: Ket<T>,
    F: Fn(&[T]) -> Result<(CMatrix<T>, Vec<K>)>,
{
    let refs: Vec<&K> = reference.iter().collect();
    let s = gramian_of(&refs)?;
    let s_inv = linalg::metric_inverse(&s, cond_cap)?;
    let brakets = |lambda: &[T]| -> Result<CMatrix<T>> {
        let (r, kets) = state(lambda)?;
        if r.shape() != (kets.len(), kets.len()) {
            return Err(Error::DimensionMismatch(format!(
                "state matrix {:?} for {} kets",
                r.shape(),
                kets.len()
            )));
        }
        let o = CMatrix::from_fn(reference.len(), kets.len(), |k, i| {
            reference[k].overlap(&kets[i])
        });
        Ok(&o * r * o.adjoint())
    };
    let base = linalg::hermitize(&(&s_inv * brakets(params)? * &s_inv));
    let two = lit::<T>(2.0);
    (0..params.len())
        .map(|mu| {
            let h = step_rel * T::one().max(params[mu].abs());
            let mut plus = params.to_vec();
            let mut minus = params.to_vec();
            plus[mu] += h;
            minus[mu] -= h;
            let tilde = (brakets(&plus)? - brakets(&minus)?) * re(T::one() / (two * h));
            let d = linalg::hermitize(&(&s_inv * tilde * &s_inv));
            // ∂Tr ρ = 0 holds exactly; drop the difference quotient's trace error.
            let drift = linalg::trace(&(&d * &s));
            Ok(d - &base * drift)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Complex;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    fn qubit_model() -> ModelMatrices<f64> {
        let r = CMatrix::from_row_slice(2, 2, &[c(0.7), c(0.1), c(0.1), c(0.3)]);
        let d = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
        ModelMatrices::new(r, CMatrix::identity(2, 2), vec![d], vec!["p".into()]).unwrap()
    }

    #[test]
    fn valid_model_passes() {
        let m = qubit_model();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.num_params(), 1);
    }

    #[test]
    fn trace_violation_detected() {
        let mut m = qubit_model();
        m.r[(0, 0)] = c(0.9);
        assert!(matches!(
            m.check_invariants(),
            Err(Error::ModelInvariantViolation(_))
        ));
    }

    #[test]
    fn traceful_derivative_detected() {
        let mut m = qubit_model();
        m.d[0][(1, 1)] = c(1.0);
        assert!(matches!(
            m.check_invariants(),
            Err(Error::ModelInvariantViolation(_))
        ));
    }

    #[test]
    fn negative_state_detected() {
        let mut m = qubit_model();
        m.r = CMatrix::from_row_slice(2, 2, &[c(1.2), c(0.0), c(0.0), c(-0.2)]);
        assert!(matches!(
            m.check_invariants(),
            Err(Error::ModelInvariantViolation(_))
        ));
    }

    #[test]
    fn permutation_must_be_bijective() {
        let m = qubit_model();
        assert!(m.permuted(&[1, 0]).is_ok());
        assert!(m.permuted(&[0, 0]).is_err());
        assert!(m.permuted(&[0, 2]).is_err());
    }
}
