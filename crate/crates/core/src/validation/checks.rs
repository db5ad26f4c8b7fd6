use std::time::Instant;

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::synthetic::{random_hermitian, random_model, SyntheticSpec};
use super::{Part, ValidationConfig};
use crate::cat::{
    alpha_candidates, build_alpha_model, build_c_model, build_displacement_model,
    c_sld_closed_form, closed_form_qfi_cat, closed_form_qfi_displacement, displacement_candidates,
    displacement_qfi, displacement_sld_closed_form, lossy_estimation, lossy_map, lossy_state,
    mean_photon_cat, mean_photon_pure_cat, pure_cat_displacement_qfi, qfi_squeezed, CatConfig,
    LadderKet, LossyConfig, SqueezedConfig,
};
use crate::engine::{
    self, expectation, finite_difference_derivatives, operator_product, sld_products, sld_residual,
    to_tilde, ModelMatrices, QfiResult,
};
use crate::error::Result;
use crate::linalg::{self, CMatrix};
use crate::oracle::{eigen_qfi, orthonormalize};

const CAP: f64 = 1e12;
const RANK_TOL: f64 = 1e-10;
const EIG_FLOOR: f64 = 1e-12;
const FD_STEP: f64 = 1e-6;
const SYNTHETIC_MODELS: usize = 200;

/// `{0, 0.1, …, 0.9} × {0.3, 0.6, …, 3.0}`.
fn cat_grid() -> impl Iterator<Item = (f64, f64)> {
    (0..10).flat_map(|i| (1..=10).map(move |j| (i as f64 / 10.0, 0.3 * j as f64)))
}

fn amplitude_grid() -> impl Iterator<Item = f64> {
    (1..=10).map(|j| 0.3 * j as f64)
}

fn lossy_points() -> impl Iterator<Item = (f64, f64)> {
    [0.5, 1.0, 2.0]
        .into_iter()
        .flat_map(|a0| [0.1, 0.3, 0.5].into_iter().map(move |g| (a0, g)))
}

fn rel(value: f64, exact: f64) -> f64 {
    (value - exact).abs() / exact.abs()
}

fn at(c: f64, alpha: f64) -> String {
    format!("c={c}, alpha={alpha:.1}")
}

fn at_lossy(alpha0: f64, gammabar: f64) -> String {
    format!("alpha0={alpha0}, gammabar={gammabar}")
}

fn runtime(start: Instant, limit_secs: f64) -> Part {
    let mut p = Part::new("runtime [s]", limit_secs);
    p.observe(start.elapsed().as_secs_f64(), || "whole check".into());
    p
}

fn evaluate(model: &ModelMatrices<f64>) -> Result<QfiResult<f64>> {
    Ok(engine::evaluate(model, RANK_TOL)?.0)
}

pub fn closed_form_hcc(cfg: &ValidationConfig) -> Result<Vec<Part>> {
    let start = Instant::now();
    let mut h = Part::new("H_cc relative error", cfg.precision(1e-8));
    for (c, alpha) in cat_grid() {
        let cat = CatConfig::new(c, alpha)?;
        let qfi = evaluate(&build_c_model(&cat, CAP)?)?;
        h.observe(rel(qfi.h[(0, 0)], closed_form_qfi_cat(&cat)?.h_cc), || {
            at(c, alpha)
        });
    }
    Ok(vec![h, runtime(start, 1.0)])
}

pub fn closed_form_halpha(cfg: &ValidationConfig) -> Result<Vec<Part>> {
    let mut aa = Part::new("H_alpha,alpha relative error", cfg.precision(1e-8));
    let mut ca = Part::new("H_c,alpha relative error", cfg.precision(1e-8));
    for (c, alpha) in cat_grid() {
        let cat = CatConfig::new(c, alpha)?;
        let qfi = evaluate(&build_alpha_model(&cat, CAP)?)?;
        let exact = closed_form_qfi_cat(&cat)?;
        aa.observe(rel(qfi.h[(1, 1)], exact.h_aa), || at(c, alpha));
        ca.observe(rel(qfi.h[(0, 1)], exact.h_ca), || at(c, alpha));
    }
    Ok(vec![aa, ca])
}

pub fn weak_commutativity(cfg: &ValidationConfig) -> Result<Vec<Part>> {
    let mut cat_pair = Part::new("|Gamma_c,alpha|", cfg.precision(1e-10));
    for (c, alpha) in cat_grid() {
        let qfi = evaluate(&build_alpha_model(&CatConfig::new(c, alpha)?, CAP)?)?;
        cat_pair.observe(qfi.gamma[(0, 1)].abs(), || at(c, alpha));
    }
    let mut lossy_pair = Part::new("|Tr rho[L_gammabar, L_alpha0]|", cfg.precision(1e-10));
    for (a0, g) in lossy_points() {
        let est = lossy_estimation(&LossyConfig::new(a0, g)?, RANK_TOL, CAP)?;
        lossy_pair.observe(2.0 * est.qfi.gamma[(0, 1)].abs(), || at_lossy(a0, g));
    }
    Ok(vec![cat_pair, lossy_pair])
}

pub fn displacement_closed_form(cfg: &ValidationConfig) -> Result<Vec<Part>> {
    let mut grid = Part::new("H_eps relative error", cfg.precision(1e-8));
    for (c, alpha) in cat_grid() {
        let cat = CatConfig::new(c, alpha)?;
        grid.observe(
            rel(
                displacement_qfi(&cat, RANK_TOL, CAP)?,
                closed_form_qfi_displacement(&cat),
            ),
            || at(c, alpha),
        );
    }
    let mut pure = Part::new("pure cat relative error", cfg.precision(1e-8));
    let mut coherent = Part::new("|H_eps - 4| at c=0", cfg.precision(1e-10));
    for alpha in amplitude_grid() {
        let h = displacement_qfi(&CatConfig::new(1.0, alpha)?, RANK_TOL, CAP)?;
        pure.observe(rel(h, pure_cat_displacement_qfi(alpha)), || at(1.0, alpha));
        let h = displacement_qfi(&CatConfig::new(0.0, alpha)?, RANK_TOL, CAP)?;
        coherent.observe((h - 4.0).abs(), || at(0.0, alpha));
    }
    Ok(vec![grid, pure, coherent])
}

pub fn sld_closed_forms(cfg: &ValidationConfig) -> Result<Vec<Part>> {
    let mut lc = Part::new("L_c entry-wise", cfg.precision(1e-9));
    for (c, alpha) in cat_grid() {
        let cat = CatConfig::new(c, alpha)?;
        let (_, slds) = engine::evaluate(&build_c_model(&cat, CAP)?, RANK_TOL)?;
        lc.observe(
            linalg::max_abs(&(&slds.l[0] - c_sld_closed_form(&cat)?)),
            || at(c, alpha),
        );
    }
    let mut residual = Part::new("printed L_eps Lyapunov residual", cfg.precision(1e-9));
    let mut qfi = Part::new("printed L_eps QFI vs solved", cfg.precision(1e-9));
    for c in [0.0, 0.2, 0.5, 0.9, 1.0] {
        for alpha in [0.5, 1.0, 1.5] {
            let cat = CatConfig::new(c, alpha)?;
            let model = build_displacement_model(&cat, CAP)?;
            let printed = displacement_sld_closed_form(&cat);
            residual.observe(sld_residual(&model, &printed, &model.d[0]), || at(c, alpha));
            let solved = evaluate(&model)?.h[(0, 0)];
            let from_printed = sld_products(&model, &[printed])?[(0, 0)].re;
            qfi.observe((from_printed - solved).abs(), || at(c, alpha));
        }
    }
    Ok(vec![lc, residual, qfi])
}

fn compare_with_oracle(
    model: &ModelMatrices<f64>,
    h: &mut Part,
    g: &mut Part,
    label: &dyn Fn() -> String,
) -> Result<()> {
    let engine = evaluate(model)?;
    let oracle = eigen_qfi(&orthonormalize(model, CAP)?, EIG_FLOOR)?.qfi;
    let worst = |a: &DMatrix<f64>, b: &DMatrix<f64>| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
            .fold(0.0, |m: f64, e| {
                if e.is_nan() || m.is_nan() {
                    f64::NAN
                } else {
                    m.max(e)
                }
            })
    };
    h.observe(worst(&oracle.h, &engine.h), label);
    g.observe(worst(&oracle.gamma, &engine.gamma), label);
    Ok(())
}

fn synthetic_spec(rng: &mut ChaCha8Rng, k: usize) -> SyntheticSpec {
    let dim = 1 + k % 6;
    SyntheticSpec {
        dim,
        rank: rng.gen_range(1..=dim),
        params: rng.gen_range(1..=3),
        metric_cond: 1e4,
        spectral_gap: 1e-2,
    }
}

pub fn oracle_equivalence(cfg: &ValidationConfig) -> Result<Vec<Part>> {
    let start = Instant::now();
    let tol = cfg.precision(1e-8);
    let (mut cat_h, mut cat_g) = (
        Part::new("cat suite H", tol),
        Part::new("cat suite Gamma", tol),
    );
    for (c, alpha) in cat_grid() {
        let cat = CatConfig::new(c, alpha)?;
        compare_with_oracle(&build_c_model(&cat, CAP)?, &mut cat_h, &mut cat_g, &|| {
            format!("c-model {}", at(c, alpha))
        })?;
        compare_with_oracle(
            &build_alpha_model(&cat, CAP)?,
            &mut cat_h,
            &mut cat_g,
            &|| format!("alpha-model {}", at(c, alpha)),
        )?;
        compare_with_oracle(
            &build_displacement_model(&cat, CAP)?,
            &mut cat_h,
            &mut cat_g,
            &|| format!("displacement {}", at(c, alpha)),
        )?;
    }
    for alpha in amplitude_grid() {
        let cat = CatConfig::new(1.0, alpha)?;
        compare_with_oracle(
            &build_displacement_model(&cat, CAP)?,
            &mut cat_h,
            &mut cat_g,
            &|| format!("displacement {}", at(1.0, alpha)),
        )?;
    }
    for (a0, g) in lossy_points() {
        let est = lossy_estimation(&LossyConfig::new(a0, g)?, RANK_TOL, CAP)?;
        compare_with_oracle(&est.model, &mut cat_h, &mut cat_g, &|| {
            format!("lossy {}", at_lossy(a0, g))
        })?;
    }
    let (mut syn_h, mut syn_g) = (
        Part::new("synthetic H", tol),
        Part::new("synthetic Gamma", tol),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 0..SYNTHETIC_MODELS {
        let spec = synthetic_spec(&mut rng, k);
        let syn = random_model(&mut rng, spec)?;
        compare_with_oracle(&syn.model, &mut syn_h, &mut syn_g, &|| {
            format!("model {k} (dim {}, rank {})", spec.dim, spec.rank)
        })?;
    }
    Ok(vec![cat_h, cat_g, syn_h, syn_g, runtime(start, 10.0)])
}

pub fn asymptotes(_cfg: &ValidationConfig) -> Result<Vec<Part>> {
    let mut hcc = Part::new("H_cc at alpha=5 vs 1/(1-c^2)", 1e-6);
    for c in (0..10).map(|i| i as f64 / 10.0) {
        let qfi = evaluate(&build_c_model(&CatConfig::new(c, 5.0)?, CAP)?)?;
        hcc.observe((qfi.h[(0, 0)] - 1.0 / (1.0 - c * c)).abs(), || at(c, 5.0));
    }
    let mut linear = Part::new("H_eps at alpha=7 vs 16c^2 nbar + 4 (relative)", 1e-3);
    for c in [0.2, 0.5, 1.0] {
        let cat = CatConfig::new(c, 7.0)?;
        let line = 16.0 * c * c * mean_photon_cat(&cat) + 4.0;
        linear.observe(rel(displacement_qfi(&cat, RANK_TOL, CAP)?, line), || {
            format!("engine, c={c}")
        });
        linear.observe(rel(closed_form_qfi_displacement(&cat), line), || {
            format!("closed form, c={c}")
        });
    }
    let mut squeezed = Part::new(
        "squeezed r=3, gammabar=0.5 vs 4/(1-e^-gammabar) (relative)",
        5e-3,
    );
    let limit = 4.0 / (1.0 - (-0.5f64).exp());
    squeezed.observe(
        rel(qfi_squeezed(&SqueezedConfig::new(3.0, 0.5)?), limit),
        || "r=3".into(),
    );
    Ok(vec![hcc, linear, squeezed])
}

/// Lossy-cat displacement QFI along an `α₀` grid: `(α₀, n̄, n̄₀, H)`.
pub(crate) fn lossy_curve(gammabar: f64, alpha0: &[f64]) -> Result<Vec<(f64, f64, f64, f64)>> {
    alpha0
        .iter()
        .map(|&a0| {
            let cat = lossy_map(&LossyConfig::new(a0, gammabar)?)?;
            let h = displacement_qfi(&cat, RANK_TOL, CAP)?;
            Ok((a0, mean_photon_cat(&cat), mean_photon_pure_cat(a0), h))
        })
        .collect()
}

fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| start + (stop - start) * k as f64 / (points - 1) as f64)
        .collect()
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    values
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (k, v)| {
            if v > best.1 {
                (k, v)
            } else {
                best
            }
        })
        .0
}

pub fn figure_shapes(_cfg: &ValidationConfig) -> Result<Vec<Part>> {
    let alpha0 = linspace(0.1, 6.0, 600);
    let mut photon = Part::new("non-increasing nbar steps", 0.0);
    let mut lossless = Part::new("non-increasing H steps at gammabar=0", 0.0);
    let mut maxima = Part::new("interior-maximum violations", 0.0);
    let mut tail = Part::new("|H/4 - 1| at alpha0=6, gammabar=0.5", 0.05);
    let mut peaks = Vec::new();
    for gammabar in [0.0, 0.1, 0.2, 0.3, 0.5] {
        let curve = lossy_curve(gammabar, &alpha0)?;
        let bad_n = curve
            .windows(2)
            .filter(|w| !(w[1].1 > w[0].1 && w[1].2 > w[0].2))
            .count();
        photon.observe(photon.error + bad_n as f64, || {
            format!("gammabar={gammabar}")
        });
        if gammabar == 0.0 {
            let bad_h = curve.windows(2).filter(|w| !(w[1].3 > w[0].3)).count();
            lossless.observe(bad_h as f64, || "gammabar=0".into());
            continue;
        }
        let k = argmax(curve.iter().map(|p| p.3));
        if k == 0 || k == curve.len() - 1 {
            maxima.observe(maxima.error + 1.0, || {
                format!("boundary maximum at gammabar={gammabar}")
            });
        }
        peaks.push((gammabar, curve[k].1, curve[k].2));
        if gammabar == 0.5 {
            let last = curve.last().map_or(f64::NAN, |p| p.3);
            tail.observe((last / 4.0 - 1.0).abs(), || format!("H={last:.6}"));
        }
    }
    let shifts = peaks
        .windows(2)
        .filter(|w| !(w[1].1 < w[0].1 && w[1].2 < w[0].2))
        .count();
    let locations = peaks
        .iter()
        .map(|(g, n, _)| format!("{g}:{n:.3}"))
        .collect::<Vec<_>>()
        .join(" ");
    maxima.observe(maxima.error + shifts as f64, || {
        format!("nbar_max {locations}")
    });
    let r = linspace(0.0, 3.0, 600);
    let mut squeezed = Part::new("squeezed decreasing steps or limit crossings", 0.0);
    for gammabar in [0.1f64, 0.2, 0.3, 0.5] {
        let limit = 4.0 / (1.0 - (-gammabar).exp());
        let h: Vec<f64> = r
            .iter()
            .map(|&r| Ok(qfi_squeezed(&SqueezedConfig::new(r, gammabar)?)))
            .collect::<Result<_>>()?;
        let bad = h.windows(2).filter(|w| w[1] < w[0]).count()
            + h.iter().filter(|&&v| !(v < limit)).count();
        squeezed.observe(squeezed.error + bad as f64, || {
            format!("gammabar={gammabar}")
        });
    }
    Ok(vec![photon, lossless, maxima, tail, squeezed])
}

/// Adds random Hermitian kernel directions to every SLD and measures what
/// changes.
fn perturb_in_kernel(
    model: &ModelMatrices<f64>,
    rng: &mut ChaCha8Rng,
    residual_part: &mut Part,
    qfi_part: &mut Part,
    label: &dyn Fn() -> String,
) -> Result<bool> {
    let (qfi, slds) = engine::evaluate(model, RANK_TOL)?;
    let sr = &model.s * &model.r;
    let rs = &model.r * &model.s;
    let kernel = linalg::lyapunov_kernel(&sr, &rs, RANK_TOL)?;
    if kernel.is_empty() {
        return Ok(false);
    }
    let mut perturbed = slds.clone();
    for (mu, l) in perturbed.l.iter_mut().enumerate() {
        let scale = linalg::norm(l).max(1.0);
        let n = model.dim();
        let direction = kernel.iter().fold(CMatrix::zeros(n, n), |acc, k| {
            acc + k * Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        *l += linalg::hermitize(&direction) * Complex::new(scale, 0.0);
        let before = slds.residuals[mu];
        let after = sld_residual(model, l, &model.d[mu]);
        residual_part.observe(
            (after - before).abs() / linalg::norm(&model.d[mu]).max(1.0),
            label,
        );
    }
    let moved = engine::qfi_gamma(model, &perturbed)?;
    let change = (&moved.h - &qfi.h)
        .amax()
        .max((&moved.gamma - &qfi.gamma).amax());
    qfi_part.observe(change, label);
    Ok(true)
}

pub fn gauge_invariance(cfg: &ValidationConfig) -> Result<Vec<Part>> {
    let mut residual = Part::new("residual change (relative to |D|)", cfg.precision(1e-10));
    let mut qfi = Part::new("H, Gamma entry change", cfg.precision(1e-8));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9a09e);
    let (mut exercised, mut total) = (0usize, 0usize);
    for (c, alpha) in cat_grid().filter(|(c, _)| [0.0, 0.5, 0.9].contains(c)) {
        let cat = CatConfig::new(c, alpha)?;
        for (name, model) in [
            ("alpha-model", build_alpha_model(&cat, CAP)?),
            ("displacement", build_displacement_model(&cat, CAP)?),
        ] {
            total += 1;
            exercised += perturb_in_kernel(&model, &mut rng, &mut residual, &mut qfi, &|| {
                format!("{name} {}", at(c, alpha))
            })? as usize;
        }
    }
    for (a0, g) in lossy_points() {
        let est = lossy_estimation(&LossyConfig::new(a0, g)?, RANK_TOL, CAP)?;
        total += 1;
        exercised += perturb_in_kernel(&est.model, &mut rng, &mut residual, &mut qfi, &|| {
            format!("lossy {}", at_lossy(a0, g))
        })? as usize;
    }
    for k in 0..50 {
        let dim = 2 + k % 5;
        let spec = SyntheticSpec {
            dim,
            rank: rng.gen_range(1..dim),
            params: 2,
            metric_cond: 1e4,
            spectral_gap: 1e-2,
        };
        let syn = random_model(&mut rng, spec)?;
        total += 1;
        exercised += perturb_in_kernel(&syn.model, &mut rng, &mut residual, &mut qfi, &|| {
            format!("synthetic {k} (dim {dim})")
        })? as usize;
    }
    let mut coverage = Part::new("models without a kernel", 0.0);
    coverage.observe((total - exercised) as f64, || {
        format!("{exercised} rank-deficient models perturbed")
    });
    Ok(vec![residual, qfi, coverage])
}

pub fn basis_enlargement(cfg: &ValidationConfig) -> Result<Vec<Part>> {
    let mut part = Part::new("|H_cc(2-dim) - H_cc(4-dim)|", cfg.precision(1e-10));
    for (c, alpha) in cat_grid() {
        let cat = CatConfig::new(c, alpha)?;
        let small = evaluate(&build_c_model(&cat, CAP)?)?.h[(0, 0)];
        let large = evaluate(&build_alpha_model(&cat, CAP)?)?.h[(0, 0)];
        part.observe((small - large).abs(), || at(c, alpha));
    }
    Ok(vec![part])
}

pub fn metric_contraction(cfg: &ValidationConfig) -> Result<Vec<Part>> {
    let tol = cfg.precision(1e-10);
    let mut product = Part::new("<k|A.B|l> explicit vs A.S.B (relative)", tol);
    let mut mean = Part::new("Tr[rho A] explicit vs Tr[R S A S] (relative)", tol);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xc0_47ac7);
    for k in 0..SYNTHETIC_MODELS {
        let spec = synthetic_spec(&mut rng, k);
        let syn = random_model(&mut rng, spec)?;
        let n = spec.dim;
        let (a, b) = (random_hermitian(&mut rng, n), random_hermitian(&mut rng, n));
        let f = &syn.coords;
        let explicit = |m: &CMatrix<f64>| f * m * f.adjoint();
        let direct = f.adjoint() * explicit(&a) * explicit(&b) * f;
        let contracted = to_tilde(&operator_product(&a, &syn.model.s, &b), &syn.model.s)?;
        let scale = linalg::max_abs(&direct).max(1.0);
        product.observe(linalg::max_abs(&(direct - contracted)) / scale, || {
            format!("model {k} (dim {n})")
        });
        let rho = explicit(&syn.model.r);
        let lhs = linalg::trace(&(rho * explicit(&a)));
        let rhs = expectation(&syn.model.r, &syn.model.s, &a);
        mean.observe(
            (lhs - rhs).norm_sqr().sqrt() / lhs.norm_sqr().sqrt().max(1.0),
            || format!("model {k} (dim {n})"),
        );
    }
    Ok(vec![product, mean])
}

fn fd_error(analytic: &[CMatrix<f64>], numeric: &[CMatrix<f64>]) -> f64 {
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, n)| linalg::max_abs(&(a - n)) / linalg::max_abs(a).max(1.0))
        .fold(0.0, f64::max)
}

pub fn finite_difference(cfg: &ValidationConfig) -> Result<Vec<Part>> {
    let tol = cfg.precision(1e-6);
    let mut alpha_part = Part::new("D(c, alpha) analytic vs finite difference", tol);
    for c in [0.2, 0.5, 0.8] {
        for alpha in [0.6, 1.0, 2.0] {
            let cat = CatConfig::new(c, alpha)?;
            let model = build_alpha_model(&cat, CAP)?;
            let reference: Vec<LadderKet<f64>> =
                alpha_candidates(&cat).into_iter().map(|d| d.ket).collect();
            let state = |p: &[f64]| {
                let moved = CatConfig {
                    c: p[0],
                    alpha: p[1],
                    epsilon: 0.0,
                };
                Ok((
                    moved.coefficients(),
                    vec![LadderKet::branch(1.0, p[1]), LadderKet::branch(-1.0, p[1])],
                ))
            };
            let fd = finite_difference_derivatives(&[c, alpha], &reference, state, FD_STEP, CAP)?;
            alpha_part.observe(fd_error(&model.d, &fd), || at(c, alpha));
        }
    }
    let mut eps_part = Part::new("D(eps) analytic vs finite difference", tol);
    for epsilon in [0.0, 0.3, 1.7] {
        let cat = CatConfig::displaced(0.5, 1.0, epsilon)?;
        let model = build_displacement_model(&cat, CAP)?;
        let reference: Vec<LadderKet<f64>> = displacement_candidates(&cat)
            .into_iter()
            .map(|d| d.ket)
            .collect();
        let state = |p: &[f64]| {
            Ok((
                cat.coefficients(),
                vec![
                    LadderKet::displaced(1.0, 1.0, p[0]),
                    LadderKet::displaced(-1.0, 1.0, p[0]),
                ],
            ))
        };
        let fd = finite_difference_derivatives(&[epsilon], &reference, state, FD_STEP, CAP)?;
        eps_part.observe(fd_error(&model.d, &fd), || format!("eps={epsilon}"));
    }
    let mut lossy_d = Part::new("D(gammabar, alpha0) transported vs finite difference", tol);
    let mut lossy_h = Part::new(
        "H(gammabar, alpha0) transported vs finite-difference model",
        tol,
    );
    for (a0, g) in lossy_points() {
        let lossy = LossyConfig::new(a0, g)?;
        let est = lossy_estimation(&lossy, RANK_TOL, CAP)?;
        let reference: Vec<LadderKet<f64>> = alpha_candidates(&lossy_map(&lossy)?)
            .into_iter()
            .map(|d| d.ket)
            .collect();
        let fd = finite_difference_derivatives(&[g, a0], &reference, lossy_state, FD_STEP, CAP)?;
        lossy_d.observe(fd_error(&est.model.d, &fd), || at_lossy(a0, g));
        let direct = ModelMatrices::new(
            est.model.r.clone(),
            est.model.s.clone(),
            fd,
            est.model.parameter_names.clone(),
        )?;
        // Difference quotients leave the support slightly; the oracle projects.
        let h = eigen_qfi(&orthonormalize(&direct, CAP)?, EIG_FLOOR)?.qfi.h;
        let err = h
            .iter()
            .zip(est.qfi.h.iter())
            .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
            .fold(0.0, f64::max);
        lossy_h.observe(err, || at_lossy(a0, g));
    }
    Ok(vec![alpha_part, eps_part, lossy_d, lossy_h])
}
