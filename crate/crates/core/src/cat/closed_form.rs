//! Analytic QFIs, SLDs, and photon numbers for cat and squeezed probes.

use nalgebra::Complex;

use super::models::{CatConfig, SqueezedConfig};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{lit, Real};

/// QFI and mean-commutator entries of the joint `(c, α)` model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatQfi<T: Real> {
    pub h_cc: T,
    pub h_ca: T,
    pub h_aa: T,
    pub gamma_ca: T,
}

pub fn closed_form_qfi_cat<T: Real>(cfg: &CatConfig<T>) -> Result<CatQfi<T>> {
    if cfg.c >= T::one() {
        return Err(Error::RankChange);
    }
    let (c, a) = (cfg.c, cfg.alpha);
    let s = cfg.s();
    let one = T::one();
    let four = lit::<T>(4.0);
    let den = (one + c * s) * (one + c * s);
    Ok(CatQfi {
        h_cc: (one - s * s) / ((one - c * c) * den),
        h_ca: -four * a * s / den,
        h_aa: four * (one - c * c * s * s + four * c * a * a * s) / den,
        gamma_ca: T::zero(),
    })
}

/// QFI for the displacement `D(iε)` of a decohered cat.
pub fn closed_form_qfi_displacement<T: Real>(cfg: &CatConfig<T>) -> T {
    let (c, a) = (cfg.c, cfg.alpha);
    let cs = c * cfg.s();
    let one = T::one();
    let four = lit::<T>(4.0);
    four * (four * a * a * (c * c + cs) + (one + cs) * (one + cs)) / ((one + cs) * (one + cs))
}

/// `c = 1` limit of [`closed_form_qfi_displacement`].
pub fn pure_cat_displacement_qfi<T: Real>(alpha: T) -> T {
    let s = (lit::<T>(-2.0) * alpha * alpha).exp();
    lit::<T>(4.0) * (lit::<T>(4.0) * alpha * alpha + T::one() + s) / (T::one() + s)
}

/// Displacement QFI of lossy squeezed vacuum.
pub fn qfi_squeezed<T: Real>(cfg: &SqueezedConfig<T>) -> T {
    let e2r = (lit::<T>(2.0) * cfg.r).exp();
    let decay = (-cfg.gammabar).exp();
    lit::<T>(4.0) * e2r / (e2r * (T::one() - decay) + decay)
}

/// `n̄ = α²(1 − cs)/(1 + cs)`.
pub fn mean_photon_cat<T: Real>(cfg: &CatConfig<T>) -> T {
    let cs = cfg.c * cfg.s();
    cfg.alpha * cfg.alpha * (T::one() - cs) / (T::one() + cs)
}

/// Photon number of the pure cat (`c = 1`), e.g. a lossy-cat probe before loss.
pub fn mean_photon_pure_cat<T: Real>(alpha: T) -> T {
    mean_photon_cat(&CatConfig {
        c: T::one(),
        alpha,
        epsilon: T::zero(),
    })
}

/// `n̄₀ = sinh²r`.
pub fn mean_photon_squeezed<T: Real>(cfg: &SqueezedConfig<T>) -> T {
    let sh = cfg.r.sinh();
    sh * sh
}

/// SLD for `c` on `{|α⟩, |−α⟩}`.
pub fn c_sld_closed_form<T: Real>(cfg: &CatConfig<T>) -> Result<CMatrix<T>> {
    if cfg.c >= T::one() {
        return Err(Error::RankChange);
    }
    let (c, s) = (cfg.c, cfg.s());
    let one = T::one();
    let two = lit::<T>(2.0);
    let scale = cfg.normalization() / ((one - c * c) * (one - s * s));
    let diag = -two * (c * s * s + two * s + c) * scale;
    let off = two * (s * s + two * c * s + one) * scale;
    let z = |x: T| Complex::new(x, T::zero());
    Ok(CMatrix::from_row_slice(
        2,
        2,
        &[z(diag), z(off), z(off), z(diag)],
    ))
}

/// SLD for `ε` on `{D|α⟩, D|−α⟩, ∂_εD|α⟩, ∂_εD|−α⟩}`.
pub fn displacement_sld_closed_form<T: Real>(cfg: &CatConfig<T>) -> CMatrix<T> {
    let (c, a, s) = (cfg.c, cfg.alpha, cfg.s());
    let zero = T::zero();
    let four = lit::<T>(4.0);
    let z = |re: T, im: T| Complex::new(re, im);
    let p = four * a / (s * (T::one() + s * c));
    let q = lit::<T>(2.0) / s;
    let w = T::one() / (s * a);
    #[rustfmt::skip]
    let entries = [
        z(zero, zero), z(zero, -p),   z(zero, zero), z(q, zero),
        z(zero, p),    z(zero, zero), z(q, zero),    z(zero, zero),
        z(zero, zero), z(q, zero),    z(zero, zero), z(zero, w),
        z(q, zero),    z(zero, zero), z(zero, -w),   z(zero, zero),
    ];
    CMatrix::from_row_slice(4, 4, &entries)
}
