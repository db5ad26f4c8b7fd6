//! Basis assembly and Gramian construction.

use nalgebra::{Complex, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::scalar::{lit, Real};

/// A vector whose scalar products with other vectors of the same kind are
/// known in closed form.
pub trait Ket<T: Real> {
    /// `⟨self|other⟩`, antilinear in `self`.
    fn overlap(&self, other: &Self) -> Complex<T>;
}

/// Explicit coordinates in some orthonormal frame. Mostly useful for
/// synthetic models and for cross-checking closed-form overlaps.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitKet<T: Real>(pub DVector<Complex<T>>);

impl<T: Real> Ket<T> for ExplicitKet<T> {
    fn overlap(&self, other: &Self) -> Complex<T> {
        self.0.dotc(&other.0)
    }
}

/// One candidate basis element.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisDescriptor<K> {
    pub label: String,
    /// 0 for a state in the support of ρ, 1 for a parameter derivative.
    pub derivative_order: u8,
    pub derivative_parameter: Option<usize>,
    pub ket: K,
}

impl<K> BasisDescriptor<K> {
    pub fn state(label: impl Into<String>, ket: K) -> Self {
        Self {
            label: label.into(),
            derivative_order: 0,
            derivative_parameter: None,
            ket,
        }
    }

    pub fn derivative(label: impl Into<String>, parameter: usize, ket: K) -> Self {
        Self {
            label: label.into(),
            derivative_order: 1,
            derivative_parameter: Some(parameter),
            ket,
        }
    }
}

/// An accepted, linearly independent set of kets together with its Gramian.
#[derive(Debug, Clone)]
pub struct BasisSet<T: Real, K> {
    descriptors: Vec<BasisDescriptor<K>>,
    discarded: Vec<BasisDescriptor<K>>,
    gram: CMatrix<T>,
    condition: T,
}

impl<T: Real, K: Ket<T>> BasisSet<T, K> {
    pub fn descriptors(&self) -> &[BasisDescriptor<K>] {
        &self.descriptors
    }

    /// Candidates rejected by the independence test, in input order.
    pub fn discarded(&self) -> &[BasisDescriptor<K>] {
        &self.discarded
    }

    pub fn len(&self) -> usize {
        self.descriptors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.descriptors.is_empty()
    }

    pub fn gram(&self) -> &CMatrix<T> {
        &self.gram
    }

    pub fn condition(&self) -> T {
        self.condition
    }

    pub fn kets(&self) -> Vec<&K> {
        self.descriptors.iter().map(|d| &d.ket).collect()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.descriptors.iter().position(|d| d.label == label)
    }
}

/// Gramian `S_ij = ⟨ψ_i|ψ_j⟩` of a list of descriptors.
pub fn gramian<T: Real, K: Ket<T>>(descriptors: &[BasisDescriptor<K>]) -> Result<CMatrix<T>> {
    let kets: Vec<&K> = descriptors.iter().map(|d| &d.ket).collect();
    gramian_of(&kets)
}

pub(crate) fn gramian_of<T: Real, K: Ket<T>>(kets: &[&K]) -> Result<CMatrix<T>> {
    let n = kets.len();
    let s = CMatrix::from_fn(n, n, |i, j| kets[i].overlap(kets[j]));
    linalg::ensure_finite(&s)?;
    let dev = linalg::hermitian_deviation(&s);
    if dev > lit::<T>(1e-12) * T::one().max(linalg::norm(&s)) {
        return Err(Error::NotHermitian(dev.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(linalg::hermitize(&s))
}

/// Greedy prefix construction: candidates are visited in order and each one
/// is kept iff the Gramian of the enlarged set has condition number at most
/// `cond_cap`. Support-of-ρ kets should come first.
pub fn build_basis<T: Real, K: Ket<T>>(
    candidates: Vec<BasisDescriptor<K>>,
    cond_cap: T,
) -> Result<BasisSet<T, K>> {
    for (i, a) in candidates.iter().enumerate() {
        if candidates[..i].iter().any(|b| b.label == a.label) {
            return Err(Error::DuplicateLabel(a.label.clone()));
        }
    }
    let mut kept: Vec<BasisDescriptor<K>> = Vec::with_capacity(candidates.len());
    let mut discarded = Vec::new();
    let mut gram = CMatrix::zeros(0, 0);
    let mut condition = T::one();
    for candidate in candidates {
        let mut kets: Vec<&K> = kept.iter().map(|d| &d.ket).collect();
        kets.push(&candidate.ket);
        let enlarged = gramian_of(&kets)?;
        let cond = linalg::condition_number(&enlarged)?;
        if cond <= cond_cap {
            kept.push(candidate);
            gram = enlarged;
            condition = cond;
        } else {
            log::debug!(
                "discarding `{}` (condition number {:e})",
                candidate.label,
                cond
            );
            discarded.push(candidate);
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyBasis);
    }
    Ok(BasisSet {
        descriptors: kept,
        discarded,
        gram,
        condition,
    })
}
