//! Reference path that does everything the metric formalism avoids:
//! orthonormalize the basis, diagonalize ρ, and sum the textbook
//! eigenbasis formula. Slow and independent; used to cross-check the engine.

use nalgebra::{Cholesky, Complex, DMatrix};

use crate::engine::{ModelMatrices, QfiResult};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::scalar::{lit, tol, Real};

/// Density matrix and its derivatives in an orthonormal frame spanning the
/// basis, plus the frame `F` (with `F†F = S`) that produced them.
#[derive(Debug, Clone)]
pub struct OrthoModel<T: Real> {
    pub rho: CMatrix<T>,
    pub drho: Vec<CMatrix<T>>,
    pub frame: CMatrix<T>,
}

impl<T: Real> OrthoModel<T> {
    pub fn check_invariants(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ModelInvariantViolation(m));
        if linalg::hermitian_deviation(&self.rho) > tol::<T>(1e-10) {
            return bad("rho is not Hermitian".into());
        }
        let tr = linalg::trace(&self.rho);
        if (tr.re - T::one()).abs() > tol::<T>(1e-10) || tr.im.abs() > tol::<T>(1e-10) {
            return bad(format!("Tr[rho] = {tr}"));
        }
        let eig = linalg::herm_eig(&self.rho, tol::<T>(1e-10))?;
        if !eig.values.is_empty() && eig.min() < -tol::<T>(1e-10) {
            return bad(format!("rho has eigenvalue {:e}", eig.min()));
        }
        for d in &self.drho {
            let scale = T::one().max(linalg::norm(d));
            if linalg::hermitian_deviation(d) > tol::<T>(1e-10) * scale {
                return bad("drho is not Hermitian".into());
            }
            if linalg::trace(d).norm_sqr().sqrt() > tol::<T>(1e-10) * scale {
                return bad("drho is not traceless".into());
            }
        }
        Ok(())
    }
}

/// Orthonormal components through the metric square root:
/// `ρ = S^{1/2}·R·S^{1/2}`, `∂_μρ = S^{1/2}·D⁽μ⁾·S^{1/2}`.
pub fn orthonormalize<T: Real>(model: &ModelMatrices<T>, cond_cap: T) -> Result<OrthoModel<T>> {
    let cond = linalg::condition_number(&model.s)?;
    if !(cond <= cond_cap) {
        return Err(Error::SingularMetric(
            cond.to_f64().unwrap_or(f64::INFINITY),
        ));
    }
    let scale = T::one().max(linalg::norm(&model.s));
    let frame = linalg::psd_sqrt(&model.s, tol::<T>(1e-10) * scale)?;
    orthonormalize_with_frame(model, frame)
}

/// Orthonormal components with an arbitrary frame `F` satisfying
/// `F†F = S`: `ρ = F·R·F†`.
pub fn orthonormalize_with_frame<T: Real>(
    model: &ModelMatrices<T>,
    frame: CMatrix<T>,
) -> Result<OrthoModel<T>> {
    let n = model.dim();
    if frame.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "frame {:?} for dimension {n}",
            frame.shape()
        )));
    }
    let mismatch = (frame.adjoint() * &frame - &model.s).norm();
    if mismatch > tol::<T>(1e-10) * T::one().max(linalg::norm(&model.s)) {
        return Err(Error::InvalidConfig(format!(
            "frame does not reproduce the metric ({mismatch:e})"
        )));
    }
    let fa = frame.adjoint();
    let rho = linalg::hermitize(&(&frame * &model.r * &fa));
    let drho = model
        .d
        .iter()
        .map(|d| linalg::hermitize(&(&frame * d * &fa)))
        .collect();
    let ortho = OrthoModel { rho, drho, frame };
    ortho.check_invariants()?;
    Ok(ortho)
}

/// Triangular frame from the Cholesky factor `S = L·L†`, i.e. `F = L†`.
pub fn cholesky_frame<T: Real>(s: &CMatrix<T>) -> Result<CMatrix<T>> {
    let chol = Cholesky::new(s.clone()).ok_or(Error::SingularMetric(f64::INFINITY))?;
    Ok(chol.l().adjoint())
}

/// Eigenbasis QFI with divergence diagnostics.
#[derive(Debug, Clone)]
pub struct OracleQfi<T: Real> {
    /// Entries involving a divergent parameter are `NaN` off the diagonal
    /// and `+∞` on it.
    pub qfi: QfiResult<T>,
    /// Parameters whose derivative has weight on eigenpairs below the floor.
    pub divergent: Vec<usize>,
    /// `Σ |⟨i|∂_μρ|j⟩|²` over the dropped pairs, per parameter.
    pub dropped_mass: Vec<T>,
}

/// Mass above which dropped eigenpairs signal a divergent QFI.
pub const DIVERGENCE_MASS: f64 = 1e-6;

/// `H_μν + iΓ_μν = Σ_{p_i+p_j > floor} 4 p_i ⟨i|∂_μρ|j⟩⟨j|∂_νρ|i⟩/(p_i+p_j)²`,
/// whose symmetric real part is the usual `Σ 2Re[⟨i|∂_μρ|j⟩⟨j|∂_νρ|i⟩]/(p_i+p_j)`.
/// `eig_floor` is relative to the largest eigenvalue.
pub fn eigen_qfi<T: Real>(ortho: &OrthoModel<T>, eig_floor: T) -> Result<OracleQfi<T>> {
    let eig = linalg::herm_eig(&ortho.rho, tol::<T>(1e-10))?;
    let n = eig.values.len();
    let p = &eig.values;
    let floor = eig_floor * eig.max().max(T::zero());
    let basis = &eig.vectors;
    let a: Vec<CMatrix<T>> = ortho
        .drho
        .iter()
        .map(|d| basis.adjoint() * d * basis)
        .collect();
    let kept = |i: usize, j: usize| p[i] + p[j] > floor;
    if !(0..n).any(|i| (0..n).any(|j| kept(i, j))) {
        return Err(Error::DegenerateFloor);
    }
    let m = a.len();
    let four = lit::<T>(4.0);
    let mut t = CMatrix::zeros(m, m);
    for mu in 0..m {
        for nu in 0..m {
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in 0..n {
                for j in 0..n {
                    if kept(i, j) {
                        let den = p[i] + p[j];
                        acc += a[mu][(i, j)]
                            * a[nu][(j, i)]
                            * Complex::new(four * p[i] / (den * den), T::zero());
                    }
                }
            }
            t[(mu, nu)] = acc;
        }
    }
    let dropped_mass: Vec<T> = a
        .iter()
        .map(|am| {
            let mut mass = T::zero();
            for i in 0..n {
                for j in 0..n {
                    if !kept(i, j) {
                        mass += am[(i, j)].norm_sqr();
                    }
                }
            }
            mass
        })
        .collect();
    let divergent: Vec<usize> = (0..m)
        .filter(|&mu| dropped_mass[mu] > lit(DIVERGENCE_MASS))
        .collect();
    let mut qfi = QfiResult::from_products(&t);
    for &mu in &divergent {
        log::warn!(
            "QFI diverges for parameter {mu}: dropped mass {:e}",
            dropped_mass[mu]
        );
        poison(&mut qfi.h, mu);
        poison(&mut qfi.gamma, mu);
        qfi.h[(mu, mu)] = lit(f64::INFINITY);
    }
    Ok(OracleQfi {
        qfi,
        divergent,
        dropped_mass,
    })
}

fn poison<T: Real>(m: &mut DMatrix<T>, k: usize) {
    let nan = lit::<T>(f64::NAN);
    for j in 0..m.ncols() {
        m[(k, j)] = nan;
        m[(j, k)] = nan;
    }
}
