//! Independent oracles for the derived numerical machinery. Each oracle
//! reimplements the target quantity from first principles (quadrature instead
//! of AGM, direct theta sums instead of the recentered evaluator, the exact
//! on-cut period formula instead of the displaced-path ladder) and pins the
//! production value.

use num_complex::Complex64;
use xy_entropy_core::asympt::{compute_moduli, entropy_integral, entropy_series};
use xy_entropy_core::model::{classify, symbol_g, ModelParams, Regime};
use xy_entropy_core::quad::{integrate, integrate_real};
use xy_entropy_core::special::{elliptic_k, ThetaParams};
use xy_entropy_core::spectrum::{entropy_exact, fourier_pi};

const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;
const PI: f64 = std::f64::consts::PI;

/// K(k) as a plain quadrature, independent of the AGM iteration.
fn elliptic_k_quadrature(k: f64) -> f64 {
    let (v, _) = integrate_real(
        |theta| {
            let s = theta.sin();
            1.0 / (1.0 - k * k * s * s).sqrt()
        },
        0.0,
        FRAC_PI_2,
        1e-14,
    )
    .unwrap();
    v
}

#[test]
fn elliptic_k_agrees_with_quadrature() {
    for i in 1..=9 {
        let k = 0.1 * f64::from(i);
        let agm = elliptic_k(k).unwrap();
        let quad = elliptic_k_quadrature(k);
        assert!(
            (agm - quad).abs() <= 1e-12 * agm,
            "K({k}): agm {agm}, quadrature {quad}"
        );
    }
}

/// Fourier coefficients of the symbol by adaptive quadrature, independent of
/// the FFT path: a_l = (1/2pi) int_0^{2pi} e^{-il theta} g(theta) d theta.
fn a_l_quadrature(l: i64, params: &ModelParams) -> Complex64 {
    let (v, _) = integrate(
        |theta| {
            let g = symbol_g(theta, params).unwrap();
            Complex64::from_polar(1.0, -(l as f64) * theta) * g
        },
        0.0,
        2.0 * PI,
        1e-14,
    )
    .unwrap();
    v / (2.0 * PI)
}

#[test]
fn fourier_coefficients_agree_with_quadrature() {
    for (gamma, h) in [(0.5, 1.0), (0.5, 3.0)] {
        let p = ModelParams::new(gamma, h).unwrap();
        for l in [-5i64, -1, 0, 1, 2, 5] {
            let oracle = a_l_quadrature(l, &p);
            assert!(oracle.im.abs() < 1e-12, "a_{l} should be real");
            // Pi_l = [[0, a_l], [-a_{-l}, 0]]
            let pi_l = fourier_pi(l, &p, 1024).unwrap();
            let got = pi_l[0][1];
            assert!(
                (got - oracle.re).abs() <= 1e-12,
                "a_{l} at ({gamma},{h}): fft {got}, quadrature {}",
                oracle.re
            );
        }
    }
}

/// One square-root factor of w, reimplemented from scratch: the principal
/// branch of sqrt(u - 1) sqrt(u + 1) scaled back to the segment.
fn factor(z: Complex64, e1: Complex64, e2: Complex64) -> Complex64 {
    let m = 0.5 * (e1 + e2);
    let s = 0.5 * (e2 - e1);
    let u = (z - m) / s;
    s * ((u - 1.0).sqrt() * (u + 1.0).sqrt())
}

/// Exact on-cut period: on the left side of J1 the factor w1 degenerates to
/// i |s1| cos t under z = m1 + s1 sin t, so
///
/// ```text
///   c = 2 int_{J1, left} dz / w = -2i int_{-pi/2}^{pi/2} dt / w2(z(t)),
/// ```
///
/// with w2 evaluated on the cut J1 itself (where it is analytic). This is the
/// oracle for the displaced-path Neville ladder.
fn c_on_cut(r: &Regime) -> Complex64 {
    let m1 = 0.5 * (r.lambda_a + r.lambda_b);
    let s1 = 0.5 * (r.lambda_b - r.lambda_a);
    let (v, _) = integrate(
        |t| 1.0 / factor(m1 + s1 * t.sin(), r.lambda_c, r.lambda_d),
        -FRAC_PI_2,
        FRAC_PI_2,
        1e-14,
    )
    .unwrap();
    Complex64::new(0.0, -2.0) * v
}

#[test]
fn period_ladder_matches_on_cut_formula() {
    for (gamma, h) in [(0.5, 1.0), (0.5, 1.9), (0.5, 3.0)] {
        let p = ModelParams::new(gamma, h).unwrap();
        let r = classify(&p).unwrap();
        let m = compute_moduli(&r, &p).unwrap();
        let oracle = c_on_cut(&r);
        assert!(
            (m.c - oracle).norm() <= 1e-10 * oracle.norm(),
            "period c at ({gamma},{h}): ladder {}, on-cut {}",
            m.c,
            oracle
        );
    }
}

/// ln theta_3(iy) by a brute-force scan of the defining sum in log space,
/// independent of the recentered production evaluator: every exponent
/// -pi tau0 n^2 + 2 pi n y is formed whole before exponentiating, with the
/// largest factored out.
fn log_theta3_direct(y: f64, tau0: f64) -> f64 {
    let e = |n: f64| -PI * tau0 * n * n + 2.0 * PI * n * y;
    let m = (-150..=150)
        .map(|n| e(f64::from(n)))
        .fold(f64::MIN, f64::max);
    let sum: f64 = (-150..=150).map(|n| (e(f64::from(n)) - m).exp()).sum();
    m + sum.ln()
}

/// Entropy integral reimplemented with raw theta sums over [x_cut, 12] plus a
/// quadratic cap for [0, x_cut].
fn entropy_integral_oracle(tau0: f64, sigma: u8) -> f64 {
    let a0 = 0.5 * f64::from(sigma) * tau0;
    let g_direct = |x: f64| -> f64 {
        log_theta3_direct(x + a0, tau0) + log_theta3_direct((x - a0).abs(), tau0)
            - 2.0 * log_theta3_direct(a0, tau0)
    };
    let x_cut = 1e-3;
    let (main, _) = integrate_real(
        |x| 0.5 * PI * g_direct(x) / (PI * x).sinh().powi(2),
        x_cut,
        12.0,
        1e-12,
    )
    .unwrap();
    // quadratic cap: G ~ c2 x^2, c2 estimated at x_cut; the O(x_cut^2)
    // relative error of the estimate moves S by ~1e-10
    let c2 = g_direct(x_cut) / (x_cut * x_cut);
    let (cap, _) = integrate_real(
        |x| 0.5 * PI * c2 * x * x / (PI * x).sinh().powi(2),
        0.0,
        x_cut,
        1e-14,
    )
    .unwrap();
    main + cap
}

#[test]
fn entropy_integral_agrees_with_raw_theta_oracle() {
    for (gamma, h) in [(0.5, 1.0), (0.5, 1.9), (0.5, 3.0)] {
        let p = ModelParams::new(gamma, h).unwrap();
        let r = classify(&p).unwrap();
        let m = compute_moduli(&r, &p).unwrap();
        let got = entropy_integral(&m, r.sigma).unwrap().value;
        let oracle = entropy_integral_oracle(m.tau0, r.sigma);
        assert!(
            (got - oracle).abs() <= 1e-8,
            "entropy integral at ({gamma},{h}): production {got}, oracle {oracle}"
        );
    }
}

#[test]
fn theta_params_accepts_production_range() {
    // the asymptotic routes hand ThetaParams every grid tau0; the smallest
    // grid value is ~0.53, far above the 0.05 evaluator floor
    assert!(ThetaParams::new(0.53).is_ok());
}

#[test]
fn finite_l_route_converges_to_the_series_value() {
    let p = ModelParams::new(0.5, 1.0).unwrap();
    let r = classify(&p).unwrap();
    let m = compute_moduli(&r, &p).unwrap();
    let s_inf = entropy_series(&m, r.sigma).unwrap().value;
    let s_60 = entropy_exact(60, &p).unwrap().value;
    assert!(
        (s_60 - s_inf).abs() < 1e-6,
        "finite-L route: S_60 = {s_60}, series limit = {s_inf}"
    );
}
