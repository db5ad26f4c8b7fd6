//! Properties that must hold for any well-conditioned model.

use gramqfi::engine::{self, expectation, from_tilde, qfi_gamma, sld_residual, to_tilde};
use gramqfi::linalg::{self, CMatrix};
use gramqfi::oracle::{cholesky_frame, eigen_qfi, orthonormalize, orthonormalize_with_frame};
use gramqfi::validation::synthetic::{
    random_hermitian, random_model, SyntheticModel, SyntheticSpec,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CAP: f64 = 1e12;
const RANK_TOL: f64 = 1e-10;

fn synthetic(seed: u64, dim: usize, rank: usize, params: usize) -> SyntheticModel {
    conditioned(seed, dim, rank, params, 1e6)
}

fn conditioned(seed: u64, dim: usize, rank: usize, params: usize, cond: f64) -> SyntheticModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_model(
        &mut rng,
        SyntheticSpec {
            dim,
            rank: rank.min(dim),
            params,
            metric_cond: cond,
            spectral_gap: 1e-3,
        },
    )
    .unwrap()
}

fn shape() -> impl Strategy<Value = (u64, usize, usize, usize)> {
    (any::<u64>(), 2usize..=6, 1usize..=6, 1usize..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn qfi_is_symmetric_psd_and_gamma_antisymmetric((seed, dim, rank, params) in shape()) {
        let syn = synthetic(seed, dim, rank, params);
        let (qfi, slds) = engine::evaluate(&syn.model, RANK_TOL).unwrap();
        let scale = qfi.h.norm().max(1.0);
        prop_assert!((&qfi.h - qfi.h.transpose()).amax() <= 1e-10 * scale);
        prop_assert!((&qfi.gamma + qfi.gamma.transpose()).amax() <= 1e-10 * scale);
        let eig = linalg::herm_eig(&linalg::complexify(&qfi.h), 1e-12).unwrap();
        prop_assert!(eig.min() >= -1e-10 * scale);
        for (l, d) in slds.l.iter().zip(&syn.model.d) {
            prop_assert!(linalg::hermitian_deviation(l) <= 1e-12 * linalg::norm(l).max(1.0));
            prop_assert!(sld_residual(&syn.model, l, d) <= 1e-8 * linalg::norm(d).max(1.0));
        }
    }

    #[test]
    fn slds_have_zero_mean((seed, dim, rank, params) in shape()) {
        let syn = synthetic(seed, dim, rank, params);
        let (_, slds) = engine::evaluate(&syn.model, RANK_TOL).unwrap();
        for l in &slds.l {
            let mean = expectation(&syn.model.r, &syn.model.s, l);
            prop_assert!(mean.norm() <= 1e-9 * linalg::norm(l).max(1.0));
        }
    }

    #[test]
    fn basis_order_does_not_matter(
        (seed, dim, rank, params) in shape(),
        keys in proptest::collection::vec(any::<u32>(), 6),
    ) {
        let syn = synthetic(seed, dim, rank, params);
        let mut perm: Vec<usize> = (0..dim).collect();
        perm.sort_by_key(|&k| keys[k]);
        let (a, _) = engine::evaluate(&syn.model, RANK_TOL).unwrap();
        let (b, _) = engine::evaluate(&syn.model.permuted(&perm).unwrap(), RANK_TOL).unwrap();
        let scale = a.h.amax().max(1.0);
        prop_assert!((&a.h - &b.h).amax() <= 1e-11 * scale);
        prop_assert!((&a.gamma - &b.gamma).amax() <= 1e-11 * scale);
    }

    #[test]
    fn kernel_gauge_leaves_qfi_unchanged(
        (seed, dim, rank, params) in shape(),
        weights in proptest::collection::vec(-1.0f64..1.0, 72),
    ) {
        let syn = synthetic(seed, dim, rank, params);
        let model = &syn.model;
        let (qfi, mut slds) = engine::evaluate(model, RANK_TOL).unwrap();
        let sr = &model.s * &model.r;
        let rs = &model.r * &model.s;
        let kernel = linalg::lyapunov_kernel(&sr, &rs, RANK_TOL).unwrap();
        for (mu, l) in slds.l.iter_mut().enumerate() {
            let shift = kernel.iter().enumerate().fold(CMatrix::zeros(dim, dim), |acc, (k, x)| {
                acc + x * nalgebra::Complex::new(weights[(mu * 36 + k) % 72], 0.0)
            });
            *l += linalg::hermitize(&shift);
            prop_assert!(sld_residual(model, l, &model.d[mu]) <= 1e-8 * linalg::norm(&model.d[mu]).max(1.0));
        }
        let moved = qfi_gamma(model, &slds).unwrap();
        let scale = qfi.h.amax().max(1.0);
        prop_assert!((&moved.h - &qfi.h).amax() <= 1e-8 * scale);
        prop_assert!((&moved.gamma - &qfi.gamma).amax() <= 1e-8 * scale);
    }

    #[test]
    fn oracle_does_not_depend_on_the_frame((seed, dim, rank, params) in shape()) {
        let syn = synthetic(seed, dim, rank, params);
        let sqrt = eigen_qfi(&orthonormalize(&syn.model, CAP).unwrap(), 1e-12).unwrap();
        let frame = cholesky_frame(&syn.model.s).unwrap();
        let tri = eigen_qfi(&orthonormalize_with_frame(&syn.model, frame).unwrap(), 1e-12).unwrap();
        let scale = sqrt.qfi.h.amax().max(1.0);
        prop_assert!((&sqrt.qfi.h - &tri.qfi.h).amax() <= 1e-9 * scale);
        prop_assert!((&sqrt.qfi.gamma - &tri.qfi.gamma).amax() <= 1e-9 * scale);
    }

    #[test]
    fn tilde_round_trip(seed in any::<u64>(), n in 1usize..=6) {
        let syn = conditioned(seed, n, 1, 1, 1e2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5);
        let a = random_hermitian(&mut rng, n);
        let back = from_tilde(&to_tilde(&a, &syn.model.s).unwrap(), &syn.model.s, CAP).unwrap();
        prop_assert!(linalg::max_abs(&(back - &a)) <= 1e-11);
    }

    #[test]
    fn reported_lyapunov_residual_is_honest(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(&mut rng, n);
        let b = random_hermitian(&mut rng, n);
        let c = random_hermitian(&mut rng, n);
        let sol = linalg::lyapunov_lstsq(&a, &b, &c, RANK_TOL).unwrap();
        let recomputed = linalg::sylvester_residual(&a, &b, &c, &sol.x);
        prop_assert!((sol.residual - recomputed).abs() <= 1e-13);
    }

    #[test]
    fn eigen_and_square_root_consistency(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(&mut rng, n);
        let eig = linalg::herm_eig(&h, 1e-12).unwrap();
        let scale = linalg::norm(&h).max(1.0);
        prop_assert!((eig.values.sum() - linalg::trace(&h).re).abs() <= 1e-12 * scale);
        let rebuilt = eig.map_values(|v| v);
        prop_assert!(linalg::norm(&(rebuilt - &h)) <= 1e-12 * scale);

        let psd = &h * h.adjoint();
        let root = linalg::psd_sqrt(&psd, 1e-12 * linalg::norm(&psd).max(1.0)).unwrap();
        prop_assert!(linalg::hermitian_deviation(&root) <= 1e-13 * linalg::norm(&root).max(1.0));
        let commutator = &root * &psd - &psd * &root;
        prop_assert!(linalg::norm(&commutator) <= 1e-10 * linalg::norm(&psd).max(1.0));
    }
}

#[test]
fn identity_metric_leaves_state_untouched() {
    let syn = synthetic(7, 3, 2, 1);
    let mut model = syn.model.clone();
    // Same state expressed in an orthonormal frame: R → F R F†, S → I.
    let frame = cholesky_frame(&model.s).unwrap();
    let fa = frame.adjoint();
    model.r = linalg::hermitize(&(&frame * &model.r * &fa));
    model.d = model
        .d
        .iter()
        .map(|d| linalg::hermitize(&(&frame * d * &fa)))
        .collect();
    model.s = CMatrix::identity(3, 3);
    let ortho = orthonormalize(&model, CAP).unwrap();
    assert!(linalg::max_abs(&(&ortho.rho - &model.r)) < 1e-14);
    let (a, _) = engine::evaluate(&syn.model, RANK_TOL).unwrap();
    let (b, _) = engine::evaluate(&model, RANK_TOL).unwrap();
    assert!((&a.h - &b.h).amax() < 1e-10 * a.h.amax().max(1.0));
}

#[test]
fn tilde_is_trivial_for_identity_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_hermitian(&mut rng, 4);
    let id = CMatrix::<f64>::identity(4, 4);
    assert_eq!(to_tilde(&a, &id).unwrap(), a);
    assert!(linalg::max_abs(&(from_tilde(&a, &id, CAP).unwrap() - &a)) < 1e-15);
}
