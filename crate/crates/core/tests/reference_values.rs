//! Frozen reference numbers and the printed matrices of the cat models.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use gramqfi::cat::*;
use gramqfi::engine::{self, scalar_qcrb};
use gramqfi::linalg::{self, CMatrix};
use nalgebra::{Complex, DMatrix};

const CAP: f64 = 1e12;
const RANK_TOL: f64 = 1e-10;

// Independent evaluations of the closed forms at c = 0.5, α = 1.
const H_CC: f64 = 1.1482552718150076;
const H_AA: f64 = 4.4427612694767324;
const H_CA: f64 = -0.47489638807051704;
const H_DISPLACEMENT: f64 = 8.458828828773624;

fn real(m: &CMatrix<f64>) -> DMatrix<f64> {
    m.map(|z| {
        assert!(z.im.abs() < 1e-15);
        z.re
    })
}

#[test]
fn joint_qfi_at_half_coherence_unit_amplitude() {
    let cat = CatConfig::new(0.5, 1.0).unwrap();
    let (qfi, _) = engine::evaluate(&build_alpha_model(&cat, CAP).unwrap(), RANK_TOL).unwrap();
    assert_relative_eq!(qfi.h[(0, 0)], H_CC, max_relative = 1e-12);
    assert_relative_eq!(qfi.h[(1, 1)], H_AA, max_relative = 1e-12);
    assert_relative_eq!(qfi.h[(0, 1)], H_CA, max_relative = 1e-12);
    assert_abs_diff_eq!(qfi.gamma[(0, 1)], 0.0, epsilon = 1e-10);

    let closed = closed_form_qfi_cat(&cat).unwrap();
    assert_relative_eq!(closed.h_cc, H_CC, max_relative = 1e-14);
    assert_relative_eq!(closed.h_aa, H_AA, max_relative = 1e-14);
    assert_relative_eq!(closed.h_ca, H_CA, max_relative = 1e-14);
}

#[test]
fn c_model_alone_reproduces_hcc() {
    let cat = CatConfig::new(0.5, 1.0).unwrap();
    let (qfi, _) = engine::evaluate(&build_c_model(&cat, CAP).unwrap(), RANK_TOL).unwrap();
    let expected = (1.0 - (-4.0f64).exp()) / (0.75 * (1.0 + 0.5 * (-2.0f64).exp()).powi(2));
    assert_relative_eq!(qfi.h[(0, 0)], expected, max_relative = 1e-12);
    assert_relative_eq!(expected, H_CC, max_relative = 1e-15);
}

#[test]
fn displacement_qfi_at_half_coherence_unit_amplitude() {
    let cat = CatConfig::new(0.5, 1.0).unwrap();
    let h = displacement_qfi(&cat, RANK_TOL, CAP).unwrap();
    assert_relative_eq!(h, H_DISPLACEMENT, max_relative = 1e-12);
    assert_relative_eq!(
        closed_form_qfi_displacement(&cat),
        H_DISPLACEMENT,
        max_relative = 1e-14
    );
}

#[test]
fn scalar_bound_inverts_closed_form_matrix() {
    let cat = CatConfig::new(0.5, 1.0).unwrap();
    let (qfi, _) = engine::evaluate(&build_alpha_model(&cat, CAP).unwrap(), RANK_TOL).unwrap();
    let closed = DMatrix::from_row_slice(2, 2, &[H_CC, H_CA, H_CA, H_AA]);
    let expected = closed.try_inverse().unwrap().trace();
    let bound = scalar_qcrb(&qfi.h, &DMatrix::identity(2, 2), 1, CAP).unwrap();
    assert_relative_eq!(bound.bound, expected, max_relative = 1e-12);
    let ten = scalar_qcrb(&qfi.h, &DMatrix::identity(2, 2), 10, CAP).unwrap();
    assert_relative_eq!(ten.bound, expected / 10.0, max_relative = 1e-12);
}

#[test]
fn printed_c_model_matrices() {
    let cat = CatConfig::new(0.5, 1.0).unwrap();
    let m = build_c_model(&cat, CAP).unwrap();
    let s = (-2.0f64).exp();
    let n = 1.0 / (2.0 * (1.0 + 0.5 * s));
    let r = DMatrix::from_row_slice(2, 2, &[n, 0.5 * n, 0.5 * n, n]);
    let flip = DMatrix::from_row_slice(2, 2, &[0.0, n, n, 0.0]);
    assert_abs_diff_eq!(real(&m.r), r, epsilon = 1e-15);
    assert_abs_diff_eq!(
        real(&m.s),
        DMatrix::from_row_slice(2, 2, &[1.0, s, s, 1.0]),
        epsilon = 1e-15
    );
    assert_abs_diff_eq!(real(&m.d[0]), flip - &r * (2.0 * s * n), epsilon = 1e-15);
}

#[test]
fn printed_extended_metric_at_unit_amplitude() {
    let cat = CatConfig::new(0.5, 1.0).unwrap();
    let m = build_alpha_model(&cat, CAP).unwrap();
    let a = 1.0f64;
    let s = (-2.0 * a * a).exp();
    #[rustfmt::skip]
    let printed = DMatrix::from_row_slice(4, 4, &[
        1.0,            s,              0.0,                  -2.0 * s * a,
        s,              1.0,            -2.0 * s * a,         0.0,
        0.0,            -2.0 * s * a,   1.0,                  s * (4.0 * a * a - 1.0),
        -2.0 * s * a,   0.0,            s * (4.0 * a * a - 1.0), 1.0,
    ]);
    assert_abs_diff_eq!(real(&m.s), printed, epsilon = 1e-14);
    assert!(m.s.determinant().norm() > 1e-3);
    let mut r = DMatrix::zeros(4, 4);
    r.view_mut((0, 0), (2, 2))
        .copy_from(&real(&cat.coefficients()));
    assert_abs_diff_eq!(real(&m.r), r, epsilon = 1e-15);
}

#[test]
fn psd_sqrt_of_cat_metric_squares_back() {
    let cat = CatConfig::new(0.5, 1.0).unwrap();
    let s = build_c_model(&cat, CAP).unwrap().s;
    let x = linalg::psd_sqrt(&s, 1e-12).unwrap();
    assert!(linalg::max_abs(&(&x * &x - &s)) < 1e-12);
}

#[test]
fn solved_c_sld_matches_printed_matrix() {
    for (c, alpha) in [(0.5, 1.0), (0.1, 0.4), (0.9, 2.0)] {
        let cat = CatConfig::new(c, alpha).unwrap();
        let m = build_c_model(&cat, CAP).unwrap();
        let sr = &m.s * &m.r;
        let rs = &m.r * &m.s;
        let two = Complex::new(2.0, 0.0);
        let sol = linalg::lyapunov_lstsq(&sr, &rs, &(&m.d[0] * two), RANK_TOL).unwrap();
        let printed = c_sld_closed_form(&cat).unwrap();
        assert!(
            linalg::max_abs(&(&sol.x - &printed)) < 1e-10,
            "c={c} alpha={alpha}"
        );
    }
}

#[test]
fn lossy_map_examples() {
    let same = lossy_map(&LossyConfig::new(1.3, 0.0).unwrap()).unwrap();
    assert_eq!((same.c, same.alpha), (1.0, 1.3));
    let moved = lossy_map(&LossyConfig::new(1.0, 0.3).unwrap()).unwrap();
    assert_relative_eq!(moved.alpha, (-0.15f64).exp(), max_relative = 1e-15);
    assert_relative_eq!(
        moved.c,
        (-2.0 * (1.0 - (-0.3f64).exp())).exp(),
        max_relative = 1e-15
    );
}

#[test]
fn lossy_jacobian_matches_central_differences() {
    let h = 1e-6;
    for (a0, g) in [(1.0, 0.3), (0.5, 0.1), (2.0, 0.5), (1.5, 0.01)] {
        let b = lossy_jacobian(&LossyConfig::new(a0, g).unwrap());
        let at = |g: f64, a0: f64| {
            let cat = lossy_map(&LossyConfig::new(a0, g).unwrap()).unwrap();
            [cat.c, cat.alpha]
        };
        // Rows (γ̄, α₀), columns (c, α).
        for col in 0..2 {
            let fd_g = (at(g + h, a0)[col] - at(g - h, a0)[col]) / (2.0 * h);
            let fd_a = (at(g, a0 + h)[col] - at(g, a0 - h)[col]) / (2.0 * h);
            assert_abs_diff_eq!(b[(0, col)], fd_g, epsilon = 1e-7);
            assert_abs_diff_eq!(b[(1, col)], fd_a, epsilon = 1e-7);
        }
    }
}

#[test]
fn photon_number_examples() {
    assert_eq!(mean_photon_cat(&CatConfig::new(0.7, 0.0).unwrap()), 0.0);
    assert_relative_eq!(
        mean_photon_cat(&CatConfig::new(0.0, 1.7).unwrap()),
        1.7 * 1.7,
        max_relative = 1e-15
    );
    let e8 = (-8.0f64).exp();
    assert_relative_eq!(
        mean_photon_cat(&CatConfig::new(1.0, 2.0).unwrap()),
        4.0 * (1.0 - e8) / (1.0 + e8),
        max_relative = 1e-15
    );
    assert_relative_eq!(mean_photon_pure_cat(2.0), 4.0 * (1.0 - e8) / (1.0 + e8));
    let sq = SqueezedConfig::new(0.8, 0.2).unwrap();
    assert_relative_eq!(mean_photon_squeezed(&sq), 0.8f64.sinh().powi(2));
}

#[test]
fn closed_form_limits() {
    let far = closed_form_qfi_cat(&CatConfig::new(0.9, 3.0).unwrap()).unwrap();
    assert_abs_diff_eq!(far.h_cc, 1.0 / (1.0 - 0.81), epsilon = 1e-3);
    for c in [0.0, 0.3, 0.8] {
        let zero = closed_form_qfi_cat(&CatConfig::new(c, 0.0).unwrap()).unwrap();
        assert_relative_eq!(zero.h_aa, 4.0 * (1.0 - c) / (1.0 + c), max_relative = 1e-14);
        assert_eq!(zero.h_ca, 0.0);
    }
    for alpha in [0.2, 1.0, 4.0] {
        let coherent = CatConfig::new(0.0, alpha).unwrap();
        assert_eq!(closed_form_qfi_displacement(&coherent), 4.0);
    }
    assert_eq!(qfi_squeezed(&SqueezedConfig::new(0.0, 0.4).unwrap()), 4.0);
    let limit = 4.0 / (1.0 - (-0.5f64).exp());
    assert_relative_eq!(limit, 10.166, max_relative = 1e-4);
    let sq = qfi_squeezed(&SqueezedConfig::new(3.0, 0.5).unwrap());
    assert!(sq < limit && sq > 0.995 * limit);
}
