//! Dense complex matrix substrate: Hermitian eigendecomposition, PSD square
//! root, metric inverse, and a vectorized least-squares Sylvester solver.

use nalgebra::{Complex, ComplexField, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Dense complex matrix.
pub type CMatrix<T> = DMatrix<Complex<T>>;

const MAX_ITER: usize = 10_000;
const REFINEMENT_SWEEPS: usize = 2;

/// Eigenvalues in ascending order together with orthonormal eigenvectors
/// stored column-wise in the same order.
#[derive(Debug, Clone)]
pub struct EigenPairs<T: Real> {
    pub values: DVector<T>,
    pub vectors: CMatrix<T>,
}

impl<T: Real> EigenPairs<T> {
    /// `V·diag(f(λ))·V†`.
    pub fn map_values(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let mut scaled = self.vectors.clone();
        for (j, &value) in self.values.iter().enumerate() {
            scaled.column_mut(j).apply(|z| *z *= re(f(value)));
        }
        &scaled * self.vectors.adjoint()
    }

    pub fn max(&self) -> T {
        self.values[self.values.len() - 1]
    }

    pub fn min(&self) -> T {
        self.values[0]
    }
}

pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Frobenius norm.
pub fn norm<T: Real>(m: &CMatrix<T>) -> T {
    m.norm()
}

/// Largest absolute entry.
pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
}

/// `‖M − M†‖` (Frobenius).
pub fn hermitian_deviation<T: Real>(m: &CMatrix<T>) -> T {
    if !m.is_square() {
        return T::max_value().unwrap_or_else(T::one);
    }
    (m - m.adjoint()).norm()
}

/// `(M + M†)/2`.
pub fn hermitize<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    (m + m.adjoint()) * re(lit::<T>(0.5))
}

pub fn trace<T: Real>(m: &CMatrix<T>) -> Complex<T> {
    m.diagonal()
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, &z| acc + z)
}

pub fn is_finite<T: Real>(m: &CMatrix<T>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn ensure_finite<T: Real>(m: &CMatrix<T>) -> Result<()> {
    if is_finite(m) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Lifts a real matrix to a complex one.
pub fn complexify<T: Real>(m: &DMatrix<T>) -> CMatrix<T> {
    m.map(re)
}

fn ensure_square<T: Real>(m: &CMatrix<T>, what: &str) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{what} is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )))
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn herm_eig<T: Real>(m: &CMatrix<T>, atol: T) -> Result<EigenPairs<T>> {
    ensure_square(m, "matrix")?;
    ensure_finite(m)?;
    let dev = hermitian_deviation(m);
    if dev > atol {
        return Err(Error::NotHermitian(dev.to_f64().unwrap_or(f64::NAN)));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(EigenPairs {
            values: DVector::zeros(0),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(hermitize(m), T::eps(), MAX_ITER)
        .ok_or(Error::ConvergenceFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = CMatrix::zeros(n, n);
    for (j, &k) in order.iter().enumerate() {
        vectors.set_column(j, &eig.eigenvectors.column(k));
    }
    Ok(EigenPairs { values, vectors })
}

/// Hermitian square root of a positive-semidefinite matrix. Eigenvalues in
/// `[-atol, 0)` are clamped to zero.
pub fn psd_sqrt<T: Real>(m: &CMatrix<T>, atol: T) -> Result<CMatrix<T>> {
    let eig = herm_eig(m, atol)?;
    if !eig.values.is_empty() && eig.min() < -atol {
        return Err(Error::NotPsd(eig.min().to_f64().unwrap_or(f64::NAN)));
    }
    Ok(hermitize(&eig.map_values(|v| v.max(T::zero()).sqrt())))
}

/// Condition number `λmax/λmin` of a Hermitian matrix; infinite when the
/// smallest eigenvalue is not positive.
pub fn condition_number<T: Real>(m: &CMatrix<T>) -> Result<T> {
    let scale = T::one().max(norm(m));
    let eig = herm_eig(m, crate::scalar::tol::<T>(1e-10) * scale)?;
    Ok(cond_from_eig(&eig))
}

fn cond_from_eig<T: Real>(eig: &EigenPairs<T>) -> T {
    if eig.values.is_empty() {
        return T::one();
    }
    let lo = eig.min();
    if lo <= T::zero() {
        T::max_value().unwrap_or_else(T::one)
    } else {
        eig.max() / lo
    }
}

/// Inverse of a Hermitian positive-definite metric, rejected when its
/// condition number exceeds `cond_cap`.
pub fn metric_inverse<T: Real>(s: &CMatrix<T>, cond_cap: T) -> Result<CMatrix<T>> {
    let scale = T::one().max(norm(s));
    let eig = herm_eig(s, crate::scalar::tol::<T>(1e-10) * scale)?;
    let cond = cond_from_eig(&eig);
    if !(cond <= cond_cap) {
        return Err(Error::SingularMetric(
            cond.to_f64().unwrap_or(f64::INFINITY),
        ));
    }
    Ok(hermitize(&eig.map_values(|v| T::one() / v)))
}

/// Minimum-norm least-squares solution of `X·A + B·X = C`.
#[derive(Debug, Clone)]
pub struct LyapunovSolution<T: Real> {
    pub x: CMatrix<T>,
    /// `‖X·A + B·X − C‖` (Frobenius) of the returned `X`.
    pub residual: T,
    /// Number of singular values of the vectorized operator below the cutoff.
    pub rank_deficiency: usize,
}

struct Vectorized<T: Real> {
    u: CMatrix<T>,
    sigma: DVector<T>,
    v: CMatrix<T>,
    cutoff: T,
    rows: usize,
    cols: usize,
}

fn check_sylvester_dims<T: Real>(a: &CMatrix<T>, bm: &CMatrix<T>) -> Result<()> {
    ensure_square(a, "A")?;
    ensure_square(bm, "B")?;
    ensure_finite(a)?;
    ensure_finite(bm)
}

/// Full SVD `K = U·diag(σ)·V†` computed by faer in double precision.
fn full_svd<T: Real>(k: &CMatrix<T>) -> Result<(CMatrix<T>, DVector<T>, CMatrix<T>)> {
    let to_f64 = |x: T| x.to_f64().unwrap_or(f64::NAN);
    let m = faer::Mat::<faer::c64>::from_fn(k.nrows(), k.ncols(), |i, j| {
        faer::c64::new(to_f64(k[(i, j)].re), to_f64(k[(i, j)].im))
    });
    let svd = m.svd().map_err(|_| Error::ConvergenceFailure)?;
    let back = |z: faer::c64| Complex::new(lit::<T>(z.re), lit::<T>(z.im));
    let (u, v) = (svd.U(), svd.V());
    let sigma = svd.S().column_vector();
    Ok((
        CMatrix::from_fn(u.nrows(), u.ncols(), |i, j| back(u[(i, j)])),
        DVector::from_fn(sigma.nrows(), |i, _| lit::<T>(sigma[i].re)),
        CMatrix::from_fn(v.nrows(), v.ncols(), |i, j| back(v[(i, j)])),
    ))
}

/// SVD of `Aᵀ ⊗ I + I ⊗ B`, the column-major vectorization of `X ↦ X·A + B·X`.
fn vectorize<T: Real>(a: &CMatrix<T>, bm: &CMatrix<T>, rank_tol: T) -> Result<Vectorized<T>> {
    check_sylvester_dims(a, bm)?;
    let (rows, cols) = (bm.nrows(), a.nrows());
    let k = a.transpose().kronecker(&CMatrix::identity(rows, rows))
        + CMatrix::identity(cols, cols).kronecker(bm);
    let (u, sigma, v) = full_svd(&k)?;
    let top = sigma.iter().fold(T::zero(), |acc, &s| acc.max(s));
    Ok(Vectorized {
        u,
        sigma,
        v,
        cutoff: rank_tol * top,
        rows,
        cols,
    })
}

impl<T: Real> Vectorized<T> {
    fn kept(&self, sigma: T) -> bool {
        sigma > T::zero() && sigma >= self.cutoff
    }

    /// Minimum-norm least-squares solution of `X·A + B·X = C`.
    fn pseudo_solve(&self, c: &CMatrix<T>) -> CMatrix<T> {
        let mut projected = self.u.adjoint() * DVector::from_column_slice(c.as_slice());
        for (k, &sigma) in self.sigma.iter().enumerate() {
            projected[k] = if self.kept(sigma) {
                projected[k] / re(sigma)
            } else {
                re(T::zero())
            };
        }
        let solution = &self.v * projected;
        CMatrix::from_column_slice(self.rows, self.cols, solution.as_slice())
    }

    fn rank_deficiency(&self) -> usize {
        self.sigma.iter().filter(|&&s| !self.kept(s)).count()
    }
}

/// Solves `X·A + B·X = C` in the minimum-norm least-squares sense through
/// the Kronecker vectorization, discarding singular values below
/// `rank_tol·σmax`.
pub fn lyapunov_lstsq<T: Real>(
    a: &CMatrix<T>,
    bm: &CMatrix<T>,
    c: &CMatrix<T>,
    rank_tol: T,
) -> Result<LyapunovSolution<T>> {
    check_sylvester_dims(a, bm)?;
    if c.nrows() != bm.nrows() || c.ncols() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "C is {}x{}, expected {}x{}",
            c.nrows(),
            c.ncols(),
            bm.nrows(),
            a.nrows()
        )));
    }
    ensure_finite(c)?;
    let vec = vectorize(a, bm, rank_tol)?;
    let mut x = vec.pseudo_solve(c);
    // Small entries of X carry only normwise accuracy after one pass.
    for _ in 0..REFINEMENT_SWEEPS {
        let r = c - (&x * a + bm * &x);
        x += vec.pseudo_solve(&r);
    }
    let residual = sylvester_residual(a, bm, c, &x);
    Ok(LyapunovSolution {
        x,
        residual,
        rank_deficiency: vec.rank_deficiency(),
    })
}

/// Basis of the (numerical) kernel of `X ↦ X·A + B·X`.
pub fn lyapunov_kernel<T: Real>(
    a: &CMatrix<T>,
    bm: &CMatrix<T>,
    rank_tol: T,
) -> Result<Vec<CMatrix<T>>> {
    let vec = vectorize(a, bm, rank_tol)?;
    Ok(vec
        .sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| !vec.kept(s))
        .map(|(k, _)| CMatrix::from_column_slice(vec.rows, vec.cols, vec.v.column(k).as_slice()))
        .collect())
}

/// `‖X·A + B·X − C‖`.
pub fn sylvester_residual<T: Real>(
    a: &CMatrix<T>,
    bm: &CMatrix<T>,
    c: &CMatrix<T>,
    x: &CMatrix<T>,
) -> T {
    (x * a + bm * x - c).norm()
}
