//! Special functions: complete elliptic integral of the first kind and the
//! Jacobi theta function theta3 with purely imaginary modular parameter.
//!
//! theta3 is evaluated with tau = i tau0, tau0 > 0, so the nome
//! q = e^{i pi tau} = e^{-pi tau0} lies in (0, 1). The series
//!
//! ```text
//!   theta3(s) = sum_n q^{n^2} e^{2 pi i s n}
//! ```
//!
//! is summed outward from the index of largest term magnitude with the common
//! exponential factored out, so arguments with large |Im s| neither overflow
//! nor lose the leading digits. `log_theta3` returns the logarithm directly
//! and is the form consumed by the asymptotic entropy routines.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest |Im s| / tau0 accepted by the theta routines.
const S_MAX: f64 = 1e4;
/// Hard cap on series terms per wing.
const N_TERMS_MAX: i64 = 100_000;
/// Relative truncation threshold for the theta series.
const THETA_EPS: f64 = 1e-17;

/// Modular parameter tau = i tau0 and nome q = e^{-pi tau0}.
///
/// Construction refuses tau0 < 0.05: below that the series needs the modular
/// transformation to stay well conditioned, which this crate does not
/// implement. The near-critical regime is served by the small-tau asymptote
/// instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParams {
    pub tau0: f64,
    pub q: f64,
}

impl ThetaParams {
    pub fn new(tau0: f64) -> Result<Self> {
        if !tau0.is_finite() || tau0 <= 0.0 {
            return Err(Error::DomainError(format!(
                "tau0 must be positive and finite, got {tau0}"
            )));
        }
        if tau0 < 0.05 {
            return Err(Error::SmallTauError(format!(
                "tau0 = {tau0} below the supported threshold 0.05"
            )));
        }
        Ok(ThetaParams {
            tau0,
            q: (-std::f64::consts::PI * tau0).exp(),
        })
    }
}

/// Complete elliptic integral of the first kind, modulus convention:
///
/// ```text
///   K(k) = int_0^{pi/2} dphi / sqrt(1 - k^2 sin^2 phi),
/// ```
///
/// computed by the arithmetic-geometric mean, K = pi / (2 AGM(1, k')).
/// pre: 0 <= k < 1.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !k.is_finite() || !(0.0..1.0).contains(&k) {
        return Err(Error::DomainError(format!(
            "elliptic_k requires 0 <= k < 1, got {k}"
        )));
    }
    let mut a = 1.0f64;
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    for _ in 0..40 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            return Ok(std::f64::consts::PI / (a + b));
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    Err(Error::ConvergenceError(format!(
        "AGM did not converge for k = {k}"
    )))
}

/// Rescaled theta sum: returns (M, T) with theta3(s) = e^M * T, where M is
/// the log-magnitude of the largest term.
fn theta3_scaled(s: Complex64, tp: &ThetaParams) -> Result<(f64, Complex64)> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::DomainError(format!("theta3: s = {s} not finite")));
    }
    let tau0 = tp.tau0;
    let y = s.im;
    if y.abs() > S_MAX * tau0 {
        return Err(Error::DomainError(format!(
            "theta3: |Im s| = {} exceeds {S_MAX} * tau0",
            y.abs()
        )));
    }
    // e^{2 pi i s n} depends on Re s only through its fractional part.
    let x = s.re.rem_euclid(1.0);
    let pi = std::f64::consts::PI;
    // log-magnitude of term n, maximized near n0 = -y / tau0
    let ell = |n: f64| -> f64 { -pi * tau0 * n * n - 2.0 * pi * y * n };
    let n0 = (-y / tau0).round();
    let m = ell(n0);
    let term = |n: f64| -> Complex64 {
        let (sn, cs) = (2.0 * pi * x * n).sin_cos();
        (ell(n) - m).exp() * Complex64::new(cs, sn)
    };
    let mut acc = term(n0);
    let mut w = 1i64;
    loop {
        let hi = term(n0 + w as f64);
        let lo = term(n0 - w as f64);
        acc += hi + lo;
        let floor = THETA_EPS * acc.norm().max(1.0);
        if hi.norm() < floor && lo.norm() < floor {
            return Ok((m, acc));
        }
        w += 1;
        if w > N_TERMS_MAX {
            return Err(Error::ConvergenceError(format!(
                "theta3 series did not truncate within {N_TERMS_MAX} terms at s = {s}"
            )));
        }
    }
}

/// theta3(s) as a value. Fails with `NumericalError` when the value exceeds
/// the f64 range; use [`log_theta3`] there.
pub fn theta3(s: Complex64, tp: &ThetaParams) -> Result<Complex64> {
    let (m, t) = theta3_scaled(s, tp)?;
    if m > 700.0 {
        return Err(Error::NumericalError(format!(
            "theta3 overflows f64 at s = {s} (log scale {m:.1}); use log_theta3"
        )));
    }
    Ok(m.exp() * t)
}

/// Principal-branch logarithm of theta3(s), stable for large |Im s|.
pub fn log_theta3(s: Complex64, tp: &ThetaParams) -> Result<Complex64> {
    let (m, t) = theta3_scaled(s, tp)?;
    if t.norm() == 0.0 {
        return Err(Error::NumericalError(format!(
            "log_theta3 at a zero of theta3, s = {s}"
        )));
    }
    Ok(m + t.ln())
}

/// F(y) = ln theta3(i y); real and even in y, with F(y) ~ pi y^2 / tau0 at
/// large y.
pub(crate) fn log_theta3_imag_axis(y: f64, tp: &ThetaParams) -> Result<f64> {
    Ok(log_theta3(Complex64::new(0.0, y), tp)?.re)
}

/// Logarithm of the theta ratio entering the entropy integrand:
///
/// ```text
///   ln [ theta3(i(x + a0)) theta3(i(x - a0)) / theta3(i a0)^2 ],
///   a0 = sigma tau0 / 2,
/// ```
///
/// evaluated in log space. Nonnegative, zero at x = 0, growing like
/// 2 pi x^2 / tau0.
/// pre: x >= 0, sigma in {0, 1}.
pub fn log_theta_ratio(x: f64, sigma: u8, tp: &ThetaParams) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::DomainError(format!(
            "log_theta_ratio requires x >= 0, got {x}"
        )));
    }
    if sigma > 1 {
        return Err(Error::DomainError(format!(
            "sigma must be 0 or 1, got {sigma}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let a0 = 0.5 * f64::from(sigma) * tp.tau0;
    let f_plus = log_theta3_imag_axis(x + a0, tp)?;
    let f_minus = log_theta3_imag_axis((x - a0).abs(), tp)?;
    let f_center = log_theta3_imag_axis(a0, tp)?;
    Ok(f_plus + f_minus - 2.0 * f_center)
}

/// Second and fourth derivatives of F(y) = ln theta3(i y) at y = a0, from
/// moment ratios of the term distribution. Used for the small-x expansion of
/// the entropy integrand.
pub(crate) fn theta_log_derivs(a0: f64, tp: &ThetaParams) -> Result<(f64, f64)> {
    let tau0 = tp.tau0;
    let pi = std::f64::consts::PI;
    let ell = |n: f64| -> f64 { -pi * tau0 * n * n - 2.0 * pi * a0 * n };
    let n0 = (-a0 / tau0).round();
    let m = ell(n0);
    // s_k accumulates (-2 pi n)^k e^{ell(n) - m}
    let mut s = [0.0f64; 5];
    let mut add = |n: f64| -> f64 {
        let u = (ell(n) - m).exp();
        let f = -2.0 * pi * n;
        let mut p = 1.0;
        for sk in s.iter_mut() {
            *sk += u * p;
            p *= f;
        }
        u
    };
    add(n0);
    let mut w = 1i64;
    loop {
        let hi = add(n0 + w as f64);
        let lo = add(n0 - w as f64);
        // fourth-moment weights grow polynomially; pad the cutoff
        let scale = (w as f64 * 2.0 * pi).powi(4);
        if hi * scale < THETA_EPS && lo * scale < THETA_EPS {
            break;
        }
        w += 1;
        if w > N_TERMS_MAX {
            return Err(Error::ConvergenceError(
                "theta_log_derivs series did not truncate".into(),
            ));
        }
    }
    let r1 = s[1] / s[0];
    let r2 = s[2] / s[0];
    let r3 = s[3] / s[0];
    let r4 = s[4] / s[0];
    let f2 = r2 - r1 * r1;
    let f4 = r4 - 4.0 * r3 * r1 - 3.0 * r2 * r2 + 12.0 * r2 * r1 * r1 - 6.0 * r1.powi(4);
    Ok((f2, f4))
}
