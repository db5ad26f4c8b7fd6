//! Noisy cat-state models `ρ = 𝒩[|α⟩⟨α| + |−α⟩⟨−α| + c(|α⟩⟨−α| + |−α⟩⟨α|)]`
//! expanded on coherent-state bases.

use nalgebra::DMatrix;

use super::coherent::LadderKet;
use crate::engine::{
    self, build_basis, embed_zero_padded, BasisDescriptor, ModelMatrices, QfiResult, SldSolution,
};
use crate::error::{Error, Result};
use crate::linalg::{re, CMatrix};
use crate::scalar::{lit, Real};

/// Parameters of a partially decohered cat state, optionally displaced by
/// `D(iε)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatConfig<T: Real> {
    pub c: T,
    pub alpha: T,
    pub epsilon: T,
}

impl<T: Real> CatConfig<T> {
    pub fn new(c: T, alpha: T) -> Result<Self> {
        Self::displaced(c, alpha, T::zero())
    }

    pub fn displaced(c: T, alpha: T, epsilon: T) -> Result<Self> {
        if !(c >= T::zero() && c <= T::one()) {
            return Err(Error::InvalidConfig(format!(
                "coherence c = {c} outside [0, 1]"
            )));
        }
        if !alpha.is_finite() || !epsilon.is_finite() {
            return Err(Error::InvalidConfig(
                "amplitude and displacement must be finite".into(),
            ));
        }
        Ok(Self { c, alpha, epsilon })
    }

    /// `s = ⟨α|−α⟩ = e^{−2α²}`.
    pub fn s(&self) -> T {
        (lit::<T>(-2.0) * self.alpha * self.alpha).exp()
    }

    /// `𝒩 = 1/(2(1 + s·c))`.
    pub fn normalization(&self) -> T {
        T::one() / (lit::<T>(2.0) * (T::one() + self.s() * self.c))
    }

    /// `R = 𝒩[[1, c], [c, 1]]` on `{|α⟩, |−α⟩}`.
    pub fn coefficients(&self) -> CMatrix<T> {
        let n = self.normalization();
        CMatrix::from_row_slice(2, 2, &[re(n), re(n * self.c), re(n * self.c), re(n)])
    }
}

/// Amplitude-damping endpoint parameters: initial amplitude and `γ̄ = γt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossyConfig<T: Real> {
    pub alpha0: T,
    pub gammabar: T,
}

impl<T: Real> LossyConfig<T> {
    pub fn new(alpha0: T, gammabar: T) -> Result<Self> {
        if !alpha0.is_finite() || !(gammabar >= T::zero()) || !gammabar.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "need finite alpha0 and gammabar >= 0, got {alpha0}, {gammabar}"
            )));
        }
        Ok(Self { alpha0, gammabar })
    }
}

/// Squeezed vacuum `S(r)|0⟩` sent through the same lossy channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedConfig<T: Real> {
    pub r: T,
    pub gammabar: T,
}

impl<T: Real> SqueezedConfig<T> {
    pub fn new(r: T, gammabar: T) -> Result<Self> {
        if !(r >= T::zero()) || !r.is_finite() || !(gammabar >= T::zero()) || !gammabar.is_finite()
        {
            return Err(Error::InvalidConfig(format!(
                "need r >= 0 and gammabar >= 0, got {r}, {gammabar}"
            )));
        }
        Ok(Self { r, gammabar })
    }
}

pub const LABEL_PLUS: &str = "|+a>";
pub const LABEL_MINUS: &str = "|-a>";

/// `{|α⟩, |−α⟩}`.
pub fn c_candidates<T: Real>(cfg: &CatConfig<T>) -> Vec<BasisDescriptor<LadderKet<T>>> {
    vec![
        BasisDescriptor::state(LABEL_PLUS, LadderKet::branch(T::one(), cfg.alpha)),
        BasisDescriptor::state(LABEL_MINUS, LadderKet::branch(-T::one(), cfg.alpha)),
    ]
}

/// `{|α⟩, |−α⟩, ∂_α|α⟩, ∂_α|−α⟩}`.
pub fn alpha_candidates<T: Real>(cfg: &CatConfig<T>) -> Vec<BasisDescriptor<LadderKet<T>>> {
    let mut out = c_candidates(cfg);
    out.push(BasisDescriptor::derivative(
        "d_alpha|+a>",
        1,
        LadderKet::amplitude_derivative(T::one(), cfg.alpha),
    ));
    out.push(BasisDescriptor::derivative(
        "d_alpha|-a>",
        1,
        LadderKet::amplitude_derivative(-T::one(), cfg.alpha),
    ));
    out
}

/// `{D|α⟩, D|−α⟩, ∂_ε D|α⟩, ∂_ε D|−α⟩}` with `D = D(iε)`.
pub fn displacement_candidates<T: Real>(cfg: &CatConfig<T>) -> Vec<BasisDescriptor<LadderKet<T>>> {
    let (a, e) = (cfg.alpha, cfg.epsilon);
    let one = T::one();
    vec![
        BasisDescriptor::state("D|+a>", LadderKet::displaced(one, a, e)),
        BasisDescriptor::state("D|-a>", LadderKet::displaced(-one, a, e)),
        BasisDescriptor::derivative("d_eps D|+a>", 0, LadderKet::displaced_derivative(one, a, e)),
        BasisDescriptor::derivative(
            "d_eps D|-a>",
            0,
            LadderKet::displaced_derivative(-one, a, e),
        ),
    ]
}

/// Gramian of the candidates, requiring every one of them to survive the
/// independence test.
fn full_gramian<T: Real>(
    candidates: Vec<BasisDescriptor<LadderKet<T>>>,
    cond_cap: T,
) -> Result<CMatrix<T>> {
    let wanted = candidates.len();
    let basis = build_basis(candidates, cond_cap)?;
    if basis.len() != wanted {
        let dropped: Vec<&str> = basis.discarded().iter().map(|d| d.label.as_str()).collect();
        return Err(Error::DegenerateBasis(format!(
            "kets {dropped:?} are numerically dependent (condition cap {cond_cap:e})"
        )));
    }
    Ok(basis.gram().clone())
}

fn block_offdiagonal<T: Real>(block: &CMatrix<T>) -> CMatrix<T> {
    let mut out = CMatrix::zeros(4, 4);
    out.view_mut((0, 2), (2, 2)).copy_from(block);
    out.view_mut((2, 0), (2, 2)).copy_from(block);
    out
}

/// `D⁽ᶜ⁾ = 𝒩σₓ − 2s𝒩·R⁽ᶜ⁾` on `{|α⟩, |−α⟩}`.
fn c_derivative<T: Real>(cfg: &CatConfig<T>) -> CMatrix<T> {
    let n = cfg.normalization();
    let flip = CMatrix::from_row_slice(2, 2, &[re(T::zero()), re(n), re(n), re(T::zero())]);
    flip - cfg.coefficients() * re(lit::<T>(2.0) * cfg.s() * n)
}

/// Coherence-parameter model on `{|α⟩, |−α⟩}`. Rejects `c = 1`, where the
/// state changes rank and the QFI for `c` diverges.
pub fn build_c_model<T: Real>(cfg: &CatConfig<T>, cond_cap: T) -> Result<ModelMatrices<T>> {
    if cfg.c >= T::one() {
        return Err(Error::RankChange);
    }
    c_model_unguarded(cfg, cond_cap)
}

/// [`build_c_model`] without the rank-change guard.
pub fn c_model_unguarded<T: Real>(cfg: &CatConfig<T>, cond_cap: T) -> Result<ModelMatrices<T>> {
    let s = full_gramian(c_candidates(cfg), cond_cap)?;
    ModelMatrices::new(
        cfg.coefficients(),
        s,
        vec![c_derivative(cfg)],
        vec!["c".into()],
    )
}

/// Joint `(c, α)` model on the extended basis. `R` and `D⁽ᶜ⁾` are the
/// two-dimensional ones padded with zeros.
pub fn build_alpha_model<T: Real>(cfg: &CatConfig<T>, cond_cap: T) -> Result<ModelMatrices<T>> {
    let s = full_gramian(alpha_candidates(cfg), cond_cap)?;
    let r = embed_zero_padded(&cfg.coefficients(), &[0, 1], 4)?;
    let d_c = embed_zero_padded(&c_derivative(cfg), &[0, 1], 4)?;
    let sc = cfg.s() * cfg.c;
    let norm_rate = lit::<T>(4.0) * cfg.alpha * sc / (T::one() + sc);
    let d_alpha = block_offdiagonal(&cfg.coefficients()) + &r * re(norm_rate);
    ModelMatrices::new(r, s, vec![d_c, d_alpha], vec!["c".into(), "alpha".into()])
}

/// Displacement-estimation model `ρ_ε = D(iε)ρD(iε)†`.
pub fn build_displacement_model<T: Real>(
    cfg: &CatConfig<T>,
    cond_cap: T,
) -> Result<ModelMatrices<T>> {
    let s = full_gramian(displacement_candidates(cfg), cond_cap)?;
    let r = embed_zero_padded(&cfg.coefficients(), &[0, 1], 4)?;
    let d = block_offdiagonal(&cfg.coefficients());
    ModelMatrices::new(r, s, vec![d], vec!["epsilon".into()])
}

/// Displacement QFI through the engine.
pub fn displacement_qfi<T: Real>(cfg: &CatConfig<T>, rank_tol: T, cond_cap: T) -> Result<T> {
    let model = build_displacement_model(cfg, cond_cap)?;
    let (qfi, _) = engine::evaluate(&model, rank_tol)?;
    Ok(qfi.h[(0, 0)])
}

/// `(c, α)` as functions of `(γ̄, α₀)`: `α = α₀e^{−γ̄/2}`,
/// `c = exp{−2α₀²(1 − e^{−γ̄})}`.
pub fn lossy_map<T: Real>(cfg: &LossyConfig<T>) -> Result<CatConfig<T>> {
    let (c, alpha) = lossy_map_raw(cfg.gammabar, cfg.alpha0);
    CatConfig::new(c, alpha)
}

fn lossy_map_raw<T: Real>(gammabar: T, alpha0: T) -> (T, T) {
    let alpha = alpha0 * (-gammabar * lit(0.5)).exp();
    let c = (lit::<T>(-2.0) * alpha0 * alpha0 * (T::one() - (-gammabar).exp())).exp();
    (c, alpha)
}

/// `B_μν = ∂λ_ν/∂λ̃_μ` with rows `(γ̄, α₀)` and columns `(c, α)`.
pub fn lossy_jacobian<T: Real>(cfg: &LossyConfig<T>) -> DMatrix<T> {
    let (g, a0) = (cfg.gammabar, cfg.alpha0);
    let (c, alpha) = lossy_map_raw(g, a0);
    let decay = (-g).exp();
    DMatrix::from_row_slice(
        2,
        2,
        &[
            lit::<T>(-2.0) * a0 * a0 * decay * c,
            -alpha * lit(0.5),
            lit::<T>(-4.0) * a0 * (T::one() - decay) * c,
            (-g * lit(0.5)).exp(),
        ],
    )
}

/// Coefficients of the lossy state on its own `{|α⟩, |−α⟩}` at
/// `params = [γ̄, α₀]`, for finite-difference derivatives.
pub fn lossy_state<T: Real>(params: &[T]) -> Result<(CMatrix<T>, Vec<LadderKet<T>>)> {
    let [gammabar, alpha0] = params else {
        return Err(Error::DimensionMismatch(format!(
            "expected [gammabar, alpha0], got {} values",
            params.len()
        )));
    };
    let (c, alpha) = lossy_map_raw(*gammabar, *alpha0);
    let cfg = CatConfig {
        c,
        alpha,
        epsilon: T::zero(),
    };
    Ok((
        cfg.coefficients(),
        vec![
            LadderKet::branch(T::one(), alpha),
            LadderKet::branch(-T::one(), alpha),
        ],
    ))
}

/// `(γ̄, α₀)` estimation obtained from the joint `(c, α)` solution by the
/// Jacobian transport.
#[derive(Debug, Clone)]
pub struct LossyEstimate<T: Real> {
    pub model: ModelMatrices<T>,
    pub qfi: QfiResult<T>,
    pub slds: SldSolution<T>,
}

pub fn lossy_estimation<T: Real>(
    cfg: &LossyConfig<T>,
    rank_tol: T,
    cond_cap: T,
) -> Result<LossyEstimate<T>> {
    let cat = lossy_map(cfg)?;
    let model = build_alpha_model(&cat, cond_cap)?;
    let (qfi, slds) = engine::evaluate(&model, rank_tol)?;
    let b = lossy_jacobian(cfg);
    let (qfi, slds) = engine::reparameterize(&model, &qfi, &slds, &b)?;
    let model = model.reparameterized(&b, vec!["gammabar".into(), "alpha0".into()])?;
    Ok(LossyEstimate { model, qfi, slds })
}

/// `Tr ρ[L_μ, L_ν] = 2iΓ_μν`; returns its modulus.
pub fn mean_commutator<T: Real>(qfi: &QfiResult<T>, mu: usize, nu: usize) -> T {
    (lit::<T>(2.0) * qfi.gamma[(mu, nu)]).abs()
}
