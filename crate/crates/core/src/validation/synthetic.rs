//! Seeded random models on explicit, non-orthogonal kets.

use nalgebra::{Complex, DVector};
use rand::Rng;

use crate::engine::{build_basis, BasisDescriptor, ExplicitKet, ModelMatrices};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// A random model together with the kets it lives on and the ambient
/// coordinates `F` of those kets (`S = F†F`).
#[derive(Debug, Clone)]
pub struct SyntheticModel {
    pub model: ModelMatrices<f64>,
    pub kets: Vec<ExplicitKet<f64>>,
    pub coords: CMatrix<f64>,
    pub rank: usize,
}

/// Shape of the random draw.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticSpec {
    pub dim: usize,
    pub rank: usize,
    pub params: usize,
    /// Largest accepted `cond(S)`.
    pub metric_cond: f64,
    /// Smallest accepted ratio between nonzero eigenvalues of ρ.
    pub spectral_gap: f64,
}

fn uniform_complex<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix<f64> {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Random kets in `C^{dim+2}`, `R ∝ WW†` of the requested rank, and
/// `D⁽μ⁾ = ∂_t R(W + tV_μ)` with the normalization differentiated too, so
/// every derivative stays inside the support of the tangent space.
pub fn random_model<R: Rng>(rng: &mut R, spec: SyntheticSpec) -> Result<SyntheticModel> {
    let SyntheticSpec {
        dim,
        rank,
        params,
        metric_cond,
        spectral_gap,
    } = spec;
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::InvalidConfig(format!(
            "rank {rank} in dimension {dim}"
        )));
    }
    for _ in 0..1000 {
        let coords = uniform_complex(rng, dim + 2, dim);
        let kets: Vec<ExplicitKet<f64>> = (0..dim)
            .map(|j| {
                ExplicitKet(DVector::from_iterator(
                    dim + 2,
                    coords.column(j).iter().copied(),
                ))
            })
            .collect();
        let descriptors = kets
            .iter()
            .enumerate()
            .map(|(j, k)| BasisDescriptor::state(format!("k{j}"), k.clone()))
            .collect();
        let basis = build_basis(descriptors, metric_cond)?;
        if basis.len() != dim {
            continue;
        }
        let s = basis.gram().clone();
        let w = uniform_complex(rng, dim, rank);
        let gram_w = w.adjoint() * &s * &w;
        let eig = linalg::herm_eig(&gram_w, 1e-10)?;
        if eig.min() < spectral_gap * eig.max() {
            continue;
        }
        let norm = linalg::trace(&gram_w).re;
        let r = linalg::hermitize(&(&w * w.adjoint() / Complex::new(norm, 0.0)));
        let d = (0..params)
            .map(|_| {
                let v = uniform_complex(rng, dim, rank);
                let dw = &v * w.adjoint() + &w * v.adjoint();
                let dnorm = linalg::trace(&(&dw * &s)).re;
                linalg::hermitize(&((dw - &r * Complex::new(dnorm, 0.0)) / Complex::new(norm, 0.0)))
            })
            .collect();
        let names = (0..params).map(|k| format!("t{k}")).collect();
        let model = ModelMatrices::new(r, s, d, names)?;
        return Ok(SyntheticModel {
            model,
            kets,
            coords,
            rank,
        });
    }
    Err(Error::InvalidConfig(
        "no acceptable random model after 1000 draws".into(),
    ))
}

/// Random Hermitian matrix with entries in the unit square.
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> CMatrix<f64> {
    linalg::hermitize(&uniform_complex(rng, n, n))
}
