//! Single-point evaluation shared by `eval` and `sweep`.

use std::collections::BTreeMap;

use clap::ValueEnum;
use gramqfi::cat::{
    build_alpha_model, build_displacement_model, lossy_map, mean_photon_cat, mean_photon_pure_cat,
    mean_photon_squeezed, qfi_squeezed, CatConfig, LossyConfig, SqueezedConfig,
};
use gramqfi::engine::{self, scalar_qcrb};
use gramqfi::{Error, Result};
use nalgebra::DMatrix;
use serde::Serialize;

pub const RANK_TOL: f64 = 1e-10;
pub const COND_CAP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Joint estimation of coherence `c` and amplitude `alpha` of a noisy cat.
    CatParams,
    /// Displacement sensing with a cat after amplitude damping.
    CatLossy,
    /// Displacement sensing with a noisy cat.
    Displacement,
    /// Displacement sensing with lossy squeezed vacuum.
    Squeezed,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::CatParams => "cat-params",
            Self::CatLossy => "cat-lossy",
            Self::Displacement => "displacement",
            Self::Squeezed => "squeezed",
        }
    }

    /// Input flags in output order, with defaults for the optional ones.
    pub fn inputs(self) -> &'static [(&'static str, Option<f64>)] {
        match self {
            Self::CatParams => &[("c", None), ("alpha", None)],
            Self::CatLossy => &[("alpha0", None), ("gammabar", None)],
            Self::Displacement => &[("c", None), ("alpha", None), ("epsilon", Some(0.0))],
            Self::Squeezed => &[("r", None), ("gammabar", None)],
        }
    }

    /// Estimated parameters.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Self::CatParams => &["c", "alpha"],
            _ => &["epsilon"],
        }
    }

    fn uses_engine(self) -> bool {
        self != Self::Squeezed
    }

    fn has_initial_photons(self) -> bool {
        matches!(self, Self::CatLossy | Self::Squeezed)
    }

    /// Every column a record of this model can fill.
    pub fn columns(self) -> Vec<String> {
        let params = self.parameters();
        let mut cols: Vec<String> = self.inputs().iter().map(|(n, _)| n.to_string()).collect();
        cols.push("nbar".into());
        if self.has_initial_photons() {
            cols.push("nbar0".into());
        }
        if params.len() == 1 {
            cols.push("H".into());
        }
        for (i, a) in params.iter().enumerate() {
            for b in &params[i..] {
                cols.push(format!("H_{a}_{b}"));
            }
        }
        for (i, a) in params.iter().enumerate() {
            for b in &params[i + 1..] {
                cols.push(format!("Gamma_{a}_{b}"));
            }
        }
        if self.uses_engine() {
            cols.extend(params.iter().map(|p| format!("residual_{p}")));
            cols.extend(params.iter().map(|p| format!("rank_deficiency_{p}")));
        }
        cols.push("bound".into());
        cols
    }
}

/// Weight matrix and number of copies for the scalar bound.
#[derive(Debug, Clone)]
pub struct BoundSpec {
    /// Row-major entries; identity when absent.
    pub weight: Option<Vec<f64>>,
    pub copies: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub model: ModelKind,
    pub inputs: BTreeMap<String, f64>,
    pub parameters: Vec<String>,
    pub h: Vec<Vec<f64>>,
    pub gamma: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub rank_deficiencies: Vec<usize>,
    pub nbar: f64,
    pub nbar0: Option<f64>,
    /// `Tr[G·H⁻¹]/M`; absent when `H` is singular.
    pub bound: Option<f64>,
    pub copies: usize,
}

impl Record {
    pub fn column(&self, name: &str) -> Option<f64> {
        if let Some(v) = self.inputs.get(name) {
            return Some(*v);
        }
        let params = self.model.parameters();
        let index = |p: &str| params.iter().position(|q| *q == p);
        match name {
            "nbar" => return Some(self.nbar),
            "nbar0" => return self.nbar0,
            "H" if params.len() == 1 => return Some(self.h[0][0]),
            "bound" => return Some(self.bound.unwrap_or(f64::NAN)),
            _ => {}
        }
        let pair = |rest: &str| {
            params.iter().enumerate().find_map(|(i, a)| {
                let b = rest.strip_prefix(a)?.strip_prefix('_')?;
                Some((i, index(b)?))
            })
        };
        if let Some((i, j)) = name.strip_prefix("H_").and_then(pair) {
            return Some(self.h[i][j]);
        }
        if let Some((i, j)) = name.strip_prefix("Gamma_").and_then(pair) {
            return Some(self.gamma[i][j]);
        }
        if let Some(i) = name.strip_prefix("residual_").and_then(index) {
            return self.residuals.get(i).copied();
        }
        if let Some(i) = name.strip_prefix("rank_deficiency_").and_then(index) {
            return self.rank_deficiencies.get(i).map(|&k| k as f64);
        }
        None
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn weighted_bound(h: &DMatrix<f64>, spec: &BoundSpec) -> Result<Option<f64>> {
    let n = h.nrows();
    let weight = match &spec.weight {
        Some(w) if w.len() != n * n => {
            return Err(Error::InvalidConfig(format!(
                "weight has {} entries, expected {}",
                w.len(),
                n * n
            )))
        }
        Some(w) => DMatrix::from_row_slice(n, n, w),
        None => DMatrix::identity(n, n),
    };
    match scalar_qcrb(h, &weight, spec.copies, COND_CAP) {
        Ok(b) => Ok(Some(b.bound)),
        Err(Error::SingularQfi(cond)) => {
            log::warn!("QFI is singular (condition {cond:.3e}); no scalar bound");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Evaluates `kind` at the complete input assignment `inputs`.
pub fn evaluate(
    kind: ModelKind,
    inputs: &BTreeMap<String, f64>,
    bound: &BoundSpec,
) -> Result<Record> {
    let get = |name: &str| {
        inputs
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidConfig(format!("missing input `{name}`")))
    };
    let (h, gamma, residuals, rank_deficiencies, nbar, nbar0) = match kind {
        ModelKind::Squeezed => {
            let cfg = SqueezedConfig::new(get("r")?, get("gammabar")?)?;
            let n0 = mean_photon_squeezed(&cfg);
            let h = DMatrix::from_element(1, 1, qfi_squeezed(&cfg));
            let gamma = DMatrix::zeros(1, 1);
            (
                h,
                gamma,
                vec![],
                vec![],
                n0 * (-cfg.gammabar).exp(),
                Some(n0),
            )
        }
        _ => {
            let (model, nbar, nbar0) = match kind {
                ModelKind::CatParams => {
                    let cfg = CatConfig::new(get("c")?, get("alpha")?)?;
                    if cfg.c >= 1.0 {
                        return Err(Error::RankChange);
                    }
                    (
                        build_alpha_model(&cfg, COND_CAP)?,
                        mean_photon_cat(&cfg),
                        None,
                    )
                }
                ModelKind::Displacement => {
                    let cfg = CatConfig::displaced(get("c")?, get("alpha")?, get("epsilon")?)?;
                    (
                        build_displacement_model(&cfg, COND_CAP)?,
                        mean_photon_cat(&cfg),
                        None,
                    )
                }
                _ => {
                    let alpha0 = get("alpha0")?;
                    let cfg = lossy_map(&LossyConfig::new(alpha0, get("gammabar")?)?)?;
                    let n0 = mean_photon_pure_cat(alpha0);
                    (
                        build_displacement_model(&cfg, COND_CAP)?,
                        mean_photon_cat(&cfg),
                        Some(n0),
                    )
                }
            };
            let (qfi, slds) = engine::evaluate(&model, RANK_TOL)?;
            (
                qfi.h,
                qfi.gamma,
                slds.residuals,
                slds.rank_deficiencies,
                nbar,
                nbar0,
            )
        }
    };
    Ok(Record {
        model: kind,
        inputs: inputs.clone(),
        parameters: kind.parameters().iter().map(|p| p.to_string()).collect(),
        bound: weighted_bound(&h, bound)?,
        h: rows(&h),
        gamma: rows(&gamma),
        residuals,
        rank_deficiencies,
        nbar,
        nbar0,
        copies: bound.copies,
    })
}
