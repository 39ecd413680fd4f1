//! Large-L asymptotics: period integrals on the elliptic curve, the modular
//! parameter tau, entropy from theta-function representations, closed forms
//! in complete elliptic integrals, scaling limits, and the asymptotic
//! determinant.
//!
//! The curve is w^2 = (z - lambda_A)(z - lambda_B)(z - lambda_C)(z - lambda_D)
//! with branch cuts J1 = [lambda_A, lambda_B] and J2 = [lambda_C, lambda_D];
//! w is analytic off the cuts and w ~ z^2 at infinity. The periods
//!
//! ```text
//!   c = 2 int_{lambda_A}^{lambda_B} dz / w   (left side of J1),
//!   tau = (2 / c) int_{lambda_B}^{lambda_C} dz / w,
//! ```
//!
//! give tau = i tau0 with tau0 > 0. The J1 integral is taken on a path
//! displaced from the cut by delta = 1e-9 |J1| along the left normal and
//! extrapolated to delta = 0 by a Neville table in sqrt(delta), which removes
//! the O(sqrt delta) endpoint deficit of the offset path; the connecting
//! integral runs between cut endpoints where the sine substitution
//! z = m + s sin t makes the integrand smooth. The elliptic modulus k gives
//! an independent tau0 = K(k') / K(k); the quadrature value is validated
//! against it on every call.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Case, ModelParams, Regime};
use crate::quad::integrate;
use crate::special::{elliptic_k, log_theta3, theta_log_derivs, ThetaParams};
use crate::spectrum::binary_entropy;
use crate::{EntropyResult, Method, Settings};

/// Absolute distance below which a point counts as lying on a cut.
const ON_CUT_DIST: f64 = 1e-12;
/// Base displacement of the J1 integration path, relative to |J1|.
const DELTA_PATH: f64 = 1e-9;
/// Exclusion radius around +-1 and the zeros +-lambda_m of the asymptotic
/// determinant.
const EXCLUDED_RADIUS: f64 = 1e-3;
/// Ceiling on |Re tau| before the period ratio is rejected.
const TAU_PURITY_MAX: f64 = 1e-10;
/// Allowed disagreement between quadrature tau0 and K(k')/K(k).
const TAU_BRIDGE_TOL: f64 = 1e-9;
/// Relative truncation threshold for the zero series.
const SERIES_EPS: f64 = 1e-17;
/// Term cap for the zero series.
const SERIES_TERMS_MAX: usize = 100_000;

/// Periods and elliptic modulus of the curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuliData {
    /// Period c = 2 int_{J1} dz / w (purely imaginary up to quadrature error).
    pub c: Complex64,
    /// Period ratio tau = i tau0 as computed (carries the numerical Re).
    pub tau: Complex64,
    /// Im tau > 0.
    pub tau0: f64,
    /// Elliptic modulus.
    pub k: f64,
    /// Complementary modulus sqrt(1 - k^2).
    pub kprime: f64,
}

/// Distance from z to the segment [e1, e2].
fn dist_to_segment(z: Complex64, e1: Complex64, e2: Complex64) -> f64 {
    let d = e2 - e1;
    let len2 = d.norm_sqr();
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((z - e1).re * d.re + (z - e1).im * d.im) / len2
    };
    let t = t.clamp(0.0, 1.0);
    (z - (e1 + t * d)).norm()
}

/// One square-root factor of w: s f((z - m) / s) with m, s the midpoint and
/// half-span of [e1, e2] and f(u) = sqrt(u - 1) sqrt(u + 1) the principal
/// branch, analytic off the segment and ~ u at infinity. The factor squares
/// to (z - e1)(z - e2) exactly and is independent of endpoint order.
fn segment_factor(z: Complex64, e1: Complex64, e2: Complex64) -> Complex64 {
    let m = 0.5 * (e1 + e2);
    let s = 0.5 * (e2 - e1);
    let u = (z - m) / s;
    s * ((u - 1.0).sqrt() * (u + 1.0).sqrt())
}

/// w(z) without the cut-distance guard, for integrands whose paths are
/// off-cut by construction.
fn w_unchecked(z: Complex64, r: &Regime) -> Complex64 {
    segment_factor(z, r.lambda_a, r.lambda_b) * segment_factor(z, r.lambda_c, r.lambda_d)
}

/// The curve root w(z), analytic off the cuts, w(z)/z^2 -> 1 at infinity,
/// and w(conj z) = conj(w(z)).
///
/// Fails with `OnCutError` within 1e-12 of either cut.
pub fn hyperelliptic_w(z: Complex64, r: &Regime) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::DomainError(format!("w: z = {z} not finite")));
    }
    if dist_to_segment(z, r.lambda_a, r.lambda_b) < ON_CUT_DIST {
        return Err(Error::OnCutError(format!("z = {z} on or near the cut J1")));
    }
    if dist_to_segment(z, r.lambda_c, r.lambda_d) < ON_CUT_DIST {
        return Err(Error::OnCutError(format!("z = {z} on or near the cut J2")));
    }
    Ok(w_unchecked(z, r))
}

/// J1 period integral on the path displaced by delta along the left normal
/// n = i s1/|s1|, after the substitution z = m1 + s1 sin t + delta n.
///
/// Each half of [-pi/2, pi/2] is evaluated in its endpoint-local variable so
/// the factor (z - endpoint)/s1 is formed as -2 sin^2(u/2) + i delta/|s1|
/// without cancellation; the naive sin t - 1 loses all precision exactly
/// where the integrand has its sqrt(delta)-scale dip and floors the
/// quadrature error around 1e-12. The branch combination matches
/// [`segment_factor`] term for term.
fn j1_integral_at_offset(r: &Regime, delta: f64, tol: f64) -> Result<Complex64> {
    let m1 = 0.5 * (r.lambda_a + r.lambda_b);
    let s1 = 0.5 * (r.lambda_b - r.lambda_a);
    // delta n / s1 = i delta / |s1|
    let off = Complex64::new(0.0, delta / s1.norm());
    let w2 = |z: Complex64| segment_factor(z, r.lambda_c, r.lambda_d);
    // t in [0, pi/2]: u = pi/2 - t, sin t = cos u
    let (plus, _) = integrate(
        |u| {
            let q_b = Complex64::new(-2.0 * (0.5 * u).sin().powi(2), 0.0) + off;
            let q_a = Complex64::new(u.cos() + 1.0, 0.0) + off;
            let z = m1 + s1 * (Complex64::new(u.cos(), 0.0) + off);
            let w1 = s1 * q_b.sqrt() * q_a.sqrt();
            s1 * u.sin() / (w1 * w2(z))
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        tol,
    )?;
    // t in [-pi/2, 0]: v = t + pi/2, sin t = -cos v
    let (minus, _) = integrate(
        |v| {
            let q_b = Complex64::new(-(v.cos() + 1.0), 0.0) + off;
            let q_a = Complex64::new(2.0 * (0.5 * v).sin().powi(2), 0.0) + off;
            let z = m1 + s1 * (Complex64::new(-v.cos(), 0.0) + off);
            let w1 = s1 * q_b.sqrt() * q_a.sqrt();
            s1 * v.sin() / (w1 * w2(z))
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        tol,
    )?;
    Ok(plus + minus)
}

/// Connecting integral from lambda_B to lambda_C after z = mc + sc sin t.
///
/// Both endpoints are simple zeros of w; the sine substitution cancels them
/// analytically, and the endpoint-local halves keep the cancellation out of
/// the vanishing factors (z - lambda_B) and (z - lambda_C).
fn connecting_integral(r: &Regime, tol: f64) -> Result<Complex64> {
    let mc = 0.5 * (r.lambda_b + r.lambda_c);
    let sc = 0.5 * (r.lambda_c - r.lambda_b);
    let s1 = 0.5 * (r.lambda_b - r.lambda_a);
    let s2 = 0.5 * (r.lambda_d - r.lambda_c);
    // t in [-pi/2, 0]: v = t + pi/2, z - lambda_B = 2 sc sin^2(v/2)
    let (near_b, _) = integrate(
        |v| {
            let z = mc - sc * v.cos();
            let zb = 2.0 * (0.5 * v).sin().powi(2) * sc;
            let w1 = s1 * (zb / s1).sqrt() * ((z - r.lambda_a) / s1).sqrt();
            let w2 = segment_factor(z, r.lambda_c, r.lambda_d);
            sc * v.sin() / (w1 * w2)
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        tol,
    )?;
    // t in [0, pi/2]: u = pi/2 - t, z - lambda_C = -2 sc sin^2(u/2)
    let (near_c, _) = integrate(
        |u| {
            let z = mc + sc * u.cos();
            let zc = -2.0 * (0.5 * u).sin().powi(2) * sc;
            let w1 = segment_factor(z, r.lambda_a, r.lambda_b);
            let w2 = s2 * (zc / s2).sqrt() * ((z - r.lambda_d) / s2).sqrt();
            sc * u.sin() / (w1 * w2)
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        tol,
    )?;
    Ok(near_b + near_c)
}

/// Neville extrapolation to x = 0 of values ys at abscissas xs.
fn neville_to_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let n = xs.len();
    let mut p = ys.to_vec();
    for j in 1..n {
        for i in 0..n - j {
            p[i] = (p[i] * xs[i + j] - p[i + 1] * xs[i]) / (xs[i + j] - xs[i]);
        }
    }
    p[0]
}

/// Elliptic modulus k and complementary modulus k' for the regime, in the
/// cancellation-free complementary forms.
fn elliptic_modulus(params: &ModelParams, r: &Regime) -> Result<(f64, f64)> {
    let gamma = params.gamma;
    let half_h = 0.5 * params.h;
    let (k, kp) = match r.case {
        Case::Case1a => {
            let k = (half_h * half_h + gamma * gamma - 1.0).sqrt() / gamma;
            let kp = (1.0 - half_h * half_h).sqrt() / gamma;
            (k, kp)
        }
        Case::Case1b => {
            let denom = 1.0 - half_h * half_h;
            let k = ((denom - gamma * gamma) / denom).sqrt();
            let kp = gamma / denom.sqrt();
            (k, kp)
        }
        Case::Case2 => {
            let denom = half_h * half_h + gamma * gamma - 1.0;
            let k = gamma / denom.sqrt();
            let kp = (half_h * half_h - 1.0).sqrt() / denom.sqrt();
            (k, kp)
        }
    };
    if !(0.0 < k && k < 1.0) || !kp.is_finite() {
        return Err(Error::DomainError(format!(
            "elliptic modulus k = {k} outside (0, 1) at ({}, {})",
            params.gamma, params.h
        )));
    }
    Ok((k, kp))
}

/// Periods of the curve with default quadrature tolerance.
pub fn compute_moduli(r: &Regime, params: &ModelParams) -> Result<ModuliData> {
    compute_moduli_with(r, params, Settings::default().quad_tol)
}

/// Periods of the curve.
///
/// post: tau essentially purely imaginary (|Re tau| <= 1e-10, else
/// `PurityError`), tau0 > 0, and tau0 agrees with K(k')/K(k) to 1e-9 (else
/// `NumericalError`).
pub fn compute_moduli_with(r: &Regime, params: &ModelParams, quad_tol: f64) -> Result<ModuliData> {
    let cut_len = (r.lambda_b - r.lambda_a).norm();
    // the Neville weights amplify per-evaluation error by at most ~6.4
    let eval_tol = (quad_tol * 1e-3).clamp(1e-13, 1e-10);

    // offset ladder delta0 / 4^j: sqrt(delta) halves per rung, so a 4-point
    // Neville table in sqrt(delta) cancels the sqrt, linear, and 3/2-power
    // endpoint deficits of the displaced path
    let delta0 = DELTA_PATH * cut_len;
    let mut xs = Vec::with_capacity(4);
    let mut ys = Vec::with_capacity(4);
    for j in 0..4 {
        let delta = delta0 / 4f64.powi(j);
        xs.push(delta.sqrt());
        ys.push(j1_integral_at_offset(r, delta, eval_tol)?);
    }
    let i1 = neville_to_zero(&xs, &ys);
    let c = 2.0 * i1;

    let i2 = connecting_integral(r, eval_tol)?;

    let tau = i2 / i1;
    if tau.re.abs() > TAU_PURITY_MAX {
        return Err(Error::PurityError(format!(
            "Re tau = {} exceeds {TAU_PURITY_MAX}",
            tau.re
        )));
    }
    if tau.im <= 0.0 {
        return Err(Error::PurityError(format!(
            "tau = {tau} not in the upper half plane"
        )));
    }
    let tau0 = tau.im;

    let (k, kprime) = elliptic_modulus(params, r)?;
    let bridge = elliptic_k(kprime)? / elliptic_k(k)?;
    if (tau0 - bridge).abs() > TAU_BRIDGE_TOL {
        return Err(Error::NumericalError(format!(
            "period quadrature tau0 = {tau0} disagrees with K(k')/K(k) = {bridge}"
        )));
    }
    Ok(ModuliData {
        c,
        tau,
        tau0,
        k,
        kprime,
    })
}

/// Zeros of the asymptotic determinant on the real axis:
///
/// ```text
///   lambda_m = tanh((m + (1 - sigma)/2) pi tau0),  m >= 0.
/// ```
///
/// Strictly increasing in m, in [0, 1), spacing at most pi tau0.
/// pre: tau0 > 0, sigma in {0, 1}.
pub fn lambda_m(m: u32, tau0: f64, sigma: u8) -> f64 {
    debug_assert!(tau0 > 0.0 && sigma <= 1);
    let shift = 0.5 * (1.0 - f64::from(sigma));
    ((f64::from(m) + shift) * std::f64::consts::PI * tau0).tanh()
}

/// Entropy from the zero series with the default tau0 floor:
///
/// ```text
///   S = sum_{m in Z} (1 + lambda_m) ln(2 / (1 + lambda_m)),
/// ```
///
/// which pairs into H(lambda_0) + 2 sum_{m>=1} H(lambda_m) for sigma = 1 and
/// 2 sum_{m>=0} H(lambda_m) for sigma = 0.
pub fn entropy_series(moduli: &ModuliData, sigma: u8) -> Result<EntropyResult> {
    entropy_series_with(moduli, sigma, Settings::default().tau0_min)
}

/// [`entropy_series`] with an explicit tau0 floor.
pub fn entropy_series_with(moduli: &ModuliData, sigma: u8, tau0_min: f64) -> Result<EntropyResult> {
    if sigma > 1 {
        return Err(Error::DomainError(format!(
            "sigma must be 0 or 1, got {sigma}"
        )));
    }
    let tau0 = moduli.tau0;
    if tau0 < tau0_min {
        return Err(Error::SmallTauError(format!(
            "tau0 = {tau0} below tau0_min = {tau0_min}"
        )));
    }
    let mut s = if sigma == 1 {
        binary_entropy(lambda_m(0, tau0, 1))?
    } else {
        0.0
    };
    let m_start = if sigma == 1 { 1 } else { 0 };
    let mut m = m_start;
    loop {
        let term = 2.0 * binary_entropy(lambda_m(m, tau0, sigma))?;
        s += term;
        if term < SERIES_EPS * s.max(f64::MIN_POSITIVE) {
            return Ok(EntropyResult {
                value: s,
                method: Method::Series,
                err_estimate: term + 1e-15 * s,
            });
        }
        m += 1;
        if (m - m_start) as usize > SERIES_TERMS_MAX {
            return Err(Error::ConvergenceError(format!(
                "zero series did not truncate within {SERIES_TERMS_MAX} terms at tau0 = {tau0}"
            )));
        }
    }
}

/// Entropy from the theta-function integral with default tolerances:
///
/// ```text
///   S = (pi / 2) int_0^inf ln[ theta3(i(x+a0)) theta3(i(x-a0)) / theta3(i a0)^2 ]
///                 dx / sinh^2(pi x),   a0 = sigma tau0 / 2.
/// ```
///
/// Below x_cut = 1e-3 the even integrand is replaced by its quartic Taylor
/// approximation with coefficients from exact theta log-derivatives; the
/// remaining axis is integrated panel by panel until the contribution falls
/// below truncation level.
pub fn entropy_integral(moduli: &ModuliData, sigma: u8) -> Result<EntropyResult> {
    let s = Settings::default();
    entropy_integral_with(moduli, sigma, s.tau0_min, s.quad_tol)
}

/// [`entropy_integral`] with explicit tau0 floor and quadrature tolerance.
pub fn entropy_integral_with(
    moduli: &ModuliData,
    sigma: u8,
    tau0_min: f64,
    quad_tol: f64,
) -> Result<EntropyResult> {
    if sigma > 1 {
        return Err(Error::DomainError(format!(
            "sigma must be 0 or 1, got {sigma}"
        )));
    }
    let tau0 = moduli.tau0;
    if tau0 < tau0_min {
        return Err(Error::SmallTauError(format!(
            "tau0 = {tau0} below tau0_min = {tau0_min}"
        )));
    }
    let tp = ThetaParams::new(tau0)?;
    let pi = std::f64::consts::PI;
    let half_pi = 0.5 * pi;
    let a0 = 0.5 * f64::from(sigma) * tau0;

    // small-x region: G(x) = c2 x^2 + c4 x^4 + O(x^6), both coefficients from
    // the symmetric second and fourth log-derivatives of theta3 at a0
    let x_cut = 1e-3;
    let (f2, f4) = theta_log_derivs(a0, &tp)?;
    let (c2, c4) = (f2, f4 / 12.0);
    let (small, small_err) = integrate(
        |x| {
            let g = c2 * x * x + c4 * x.powi(4);
            Complex64::new(half_pi * g / (pi * x).sinh().powi(2), 0.0)
        },
        0.0,
        x_cut,
        quad_tol,
    )?;

    // main region, panel by panel with dyadic growth
    let err_slot = std::cell::RefCell::new(None);
    let integrand = |x: f64| -> Complex64 {
        match crate::special::log_theta_ratio(x, sigma, &tp) {
            Ok(g) => Complex64::new(half_pi * g / (pi * x).sinh().powi(2), 0.0),
            Err(e) => {
                err_slot.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let mut value = small.re;
    let mut err = small_err;
    let mut lo = x_cut;
    let mut hi = 0.5;
    loop {
        let (v, e) = integrate(integrand, lo, hi, quad_tol)?;
        if let Some(e) = err_slot.borrow_mut().take() {
            return Err(e);
        }
        value += v.re;
        err += e;
        // tail of the integrand decays like x^2 e^{-2 pi x}; once a panel is
        // below truncation level the remainder is negligible
        if v.re.abs() < 1e-17 * value.abs() && hi >= 4.0 {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > 64.0 {
            return Err(Error::ConvergenceError(
                "entropy integral tail did not truncate by x = 64".into(),
            ));
        }
    }
    Ok(EntropyResult {
        value,
        method: Method::Integral,
        err_estimate: err + 1e-15 * value.abs(),
    })
}

/// Entropy in closed form via complete elliptic integrals:
///
/// ```text
///   Case 1a, 1b:
///     S = 1/6 [ ln(k^2 / (16 k')) + (1 - k^2/2) (4 I(k) I(k') / pi) ] + ln 2,
///   Case 2:
///     S = 1/12 [ ln(16 / (k^2 k'^2)) + (k^2 - k'^2) (4 I(k) I(k') / pi) ].
/// ```
pub fn entropy_closed(params: &ModelParams, r: &Regime) -> Result<EntropyResult> {
    let (k, kp) = elliptic_modulus(params, r)?;
    let ik = elliptic_k(k)?;
    let ikp = elliptic_k(kp)?;
    let cross = 4.0 * ik * ikp / std::f64::consts::PI;
    let value = match r.case {
        Case::Case1a | Case::Case1b => {
            (1.0 / 6.0) * ((k * k / (16.0 * kp)).ln() + (1.0 - 0.5 * k * k) * cross)
                + std::f64::consts::LN_2
        }
        Case::Case2 => (1.0 / 12.0) * ((16.0 / (k * k * kp * kp)).ln() + (k * k - kp * kp) * cross),
    };
    Ok(EntropyResult {
        value,
        method: Method::ClosedForm,
        err_estimate: 1e-14 * value.abs().max(1.0),
    })
}

/// Leading near-critical asymptote S = pi / (6 tau0).
///
/// The neglected corrections are O(e^{-pi/tau0} / tau0^2), asymptotic as
/// tau0 -> 0; err_estimate reports that scale.
/// pre: 0 < tau0 (intended for tau0 < 0.05).
pub fn entropy_small_tau(tau0: f64) -> Result<EntropyResult> {
    if !tau0.is_finite() || tau0 <= 0.0 {
        return Err(Error::DomainError(format!(
            "entropy_small_tau requires tau0 > 0, got {tau0}"
        )));
    }
    Ok(EntropyResult {
        value: std::f64::consts::PI / (6.0 * tau0),
        method: Method::SmallTau,
        err_estimate: (-std::f64::consts::PI / tau0).exp() / (tau0 * tau0),
    })
}

/// Critical scaling law on the h -> 2 approach:
///
/// ```text
///   S = -(1/6) ln |2 - h| + (1/3) ln(4 gamma),
/// ```
///
/// with corrections O(|2 - h| ln^2 |2 - h|) reported in err_estimate.
/// pre: intended for |h - 2| < 0.1.
pub fn entropy_critical_h(params: &ModelParams) -> Result<EntropyResult> {
    let d = (2.0 - params.h).abs();
    if d == 0.0 {
        return Err(Error::DomainError("entropy_critical_h at h = 2".into()));
    }
    Ok(EntropyResult {
        value: -d.ln() / 6.0 + (4.0 * params.gamma).ln() / 3.0,
        method: Method::CriticalH,
        err_estimate: d * d.ln() * d.ln(),
    })
}

/// Isotropic-limit law for gamma -> 0 at fixed 0 < h < 2:
///
/// ```text
///   S = -(1/3) ln gamma + (1/6) ln(4 - h^2) + (1/3) ln 2,
/// ```
///
/// with corrections O(gamma ln^2 gamma) reported in err_estimate.
pub fn entropy_xx_limit(params: &ModelParams) -> Result<EntropyResult> {
    if params.h >= 2.0 {
        return Err(Error::DomainError(format!(
            "xx limit requires h < 2, got h = {}",
            params.h
        )));
    }
    let g = params.gamma;
    Ok(EntropyResult {
        value: -g.ln() / 3.0
            + (4.0 - params.h * params.h).ln() / 6.0
            + std::f64::consts::LN_2 / 3.0,
        method: Method::XXLimit,
        err_estimate: g * g.ln() * g.ln(),
    })
}

/// beta(lambda) = (1 / 2 pi i) ln((lambda + 1) / (lambda - 1)), principal
/// branch; purely imaginary for real lambda outside [-1, 1].
pub fn beta_lambda(lambda: Complex64) -> Complex64 {
    ((lambda + 1.0) / (lambda - 1.0)).ln() / Complex64::new(0.0, 2.0 * std::f64::consts::PI)
}

/// Asymptotic determinant in logarithmic form:
///
/// ```text
///   ln D_L = L ln(lambda^2 - 1) + ln theta3(beta + sigma tau/2)
///          + ln theta3(beta - sigma tau/2) - 2 ln theta3(sigma tau/2) + i pi L,
/// ```
///
/// real part ln |D_L|. Corrections to the underlying asymptotics are
/// O(lambda_C^{-L} / sqrt L).
///
/// Fails with `ExcludedPoint` if lambda lies within 1e-3 of +-1 or of a zero
/// +-lambda_m.
pub fn det_asymptotic(
    lambda: Complex64,
    l: usize,
    moduli: &ModuliData,
    sigma: u8,
) -> Result<Complex64> {
    if sigma > 1 {
        return Err(Error::DomainError(format!(
            "sigma must be 0 or 1, got {sigma}"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    if (lambda - one).norm() < EXCLUDED_RADIUS || (lambda + one).norm() < EXCLUDED_RADIUS {
        return Err(Error::ExcludedPoint(format!(
            "lambda = {lambda} within {EXCLUDED_RADIUS} of +-1"
        )));
    }
    let tau0 = moduli.tau0;
    // walk the zeros until they are buried inside the +-1 exclusion balls
    let m_max = (7.3 / (std::f64::consts::PI * tau0)).ceil() as u32 + 1;
    for m in 0..=m_max {
        let lm = lambda_m(m, tau0, sigma);
        if (lambda - lm).norm() < EXCLUDED_RADIUS || (lambda + lm).norm() < EXCLUDED_RADIUS {
            return Err(Error::ExcludedPoint(format!(
                "lambda = {lambda} within {EXCLUDED_RADIUS} of a zero +-{lm}"
            )));
        }
        if 1.0 - lm < 1e-6 {
            break;
        }
    }
    let tp = ThetaParams::new(tau0)?;
    let beta = beta_lambda(lambda);
    let a0 = Complex64::new(0.0, 0.5 * f64::from(sigma) * tau0);
    let ln_theta = |s: Complex64| log_theta3(s, &tp);
    let value =
        (lambda * lambda - one).ln() * (l as f64) + ln_theta(beta + a0)? + ln_theta(beta - a0)?
            - 2.0 * ln_theta(a0)?
            + Complex64::new(0.0, std::f64::consts::PI * l as f64);
    Ok(value)
}
