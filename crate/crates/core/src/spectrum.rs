//! Exact finite-L route: block correlation matrix, antisymmetric spectrum,
//! entropy, and the exact characteristic determinant.
//!
//! The ground-state correlations of a block of L spins are carried by the
//! real antisymmetric 2L x 2L matrix B_L built from 2x2 Toeplitz blocks
//! Pi_{j-k}, where
//!
//! ```text
//!   Pi_l = (1 / 2 pi) int_0^{2 pi} d theta e^{-i l theta} G(theta),
//!   G = [[0, g(theta)], [-g(-theta), 0]],
//! ```
//!
//! so Pi_l = [[0, a_l], [-a_{-l}, 0]] with a_l the (real) Fourier
//! coefficients of the symbol g. The canonical form of B_L is a direct sum of
//! rotations with angles nu_m in [0, 1]; the entropy is S_L = sum_m H(nu_m)
//! with H the binary entropy of (1 +- nu)/2, and
//! D_L(lambda) = det(i lambda I - B_L) = (-1)^L prod_m (lambda^2 - nu_m^2).

use faer::Mat;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::model::{symbol_g, ModelParams};
use crate::{EntropyResult, Method, Settings};

/// Residual ceiling on Im(a_l): the coefficients are real analytically.
const IMAG_RESIDUAL_MAX: f64 = 1e-10;
/// Relative ceiling on the high-order coefficient tail; above it the FFT
/// grid cannot have resolved the symbol (parameters too close to critical).
const TAIL_RATIO_MAX: f64 = 1e-11;
/// Absolute tolerance for +-nu eigenvalue pairing.
const PAIRING_TOL: f64 = 1e-9;
/// Allowed overshoot of nu above 1 before the spectrum is rejected.
const NU_OVERSHOOT_MAX: f64 = 1e-8;

/// Binary entropy of the pair (1 + nu)/2, (1 - nu)/2:
///
/// ```text
///   H(nu) = -(1+nu)/2 ln((1+nu)/2) - (1-nu)/2 ln((1-nu)/2)
/// ```
///
/// Even in nu; H(0) = ln 2, H(+-1) = 0.
/// pre: |nu| <= 1 + 1e-12 (the overshoot is clamped).
pub fn binary_entropy(nu: f64) -> Result<f64> {
    if !nu.is_finite() || nu.abs() > 1.0 + 1e-12 {
        return Err(Error::DomainError(format!(
            "binary_entropy requires |nu| <= 1, got {nu}"
        )));
    }
    let nu = nu.abs().min(1.0);
    fn xlnx(u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            u * u.ln()
        }
    }
    Ok(-xlnx(0.5 * (1.0 + nu)) - xlnx(0.5 * (1.0 - nu)))
}

/// Real antisymmetric block correlation matrix B_L, stored dense row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    l: usize,
    data: Vec<f64>,
}

impl CorrelationMatrix {
    /// Block length L.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Matrix dimension 2L.
    pub fn dim(&self) -> usize {
        2 * self.l
    }

    /// Entry B[i][j], 0-based, i, j < 2L.
    pub fn b(&self, i: usize, j: usize) -> f64 {
        self.data[i * 2 * self.l + j]
    }
}

/// Antisymmetric spectrum {nu_m}, sorted descending, each in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub nu: Vec<f64>,
}

/// Fourier coefficients a_l of the symbol for l = 0..n-1 (wrapped: a_{-l} is
/// at index n - l), from one forward FFT of n uniform samples.
fn fourier_coeffs(params: &ModelParams, n: usize) -> Result<Vec<f64>> {
    let mut buf: Vec<Complex64> = Vec::with_capacity(n);
    for j in 0..n {
        let theta = 2.0 * std::f64::consts::PI * (j as f64) / (n as f64);
        buf.push(symbol_g(theta, params)?);
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let mut peak = 0.0f64;
    let mut imag_max = 0.0f64;
    for c in buf.iter() {
        peak = peak.max(scale * c.re.abs());
        imag_max = imag_max.max(scale * c.im.abs());
    }
    if imag_max > IMAG_RESIDUAL_MAX {
        return Err(Error::NumericalError(format!(
            "imaginary residual {imag_max} in Fourier coefficients of g"
        )));
    }
    // Aliasing guard: the outer band |l| in [0.4 n, 0.5 n] must have decayed.
    let lo = (2 * n) / 5;
    let hi = n / 2;
    let mut tail = 0.0f64;
    for l in lo..=hi {
        tail = tail.max(scale * buf[l].re.abs());
        tail = tail.max(scale * buf[n - l].re.abs());
    }
    if tail > TAIL_RATIO_MAX * peak {
        return Err(Error::ConvergenceError(format!(
            "Fourier tail ratio {:.3e} at n={n}: symbol not resolved \
             (parameters too close to a phase boundary for the finite-L route)",
            tail / peak
        )));
    }
    Ok(buf.into_iter().map(|c| c.re * scale).collect())
}

/// The 2x2 Toeplitz block Pi_l = [[0, a_l], [-a_{-l}, 0]].
///
/// pre: n a power of two with n >= 8 (|l| + 1).
pub fn fourier_pi(l: i64, params: &ModelParams, n: usize) -> Result<[[f64; 2]; 2]> {
    if !n.is_power_of_two() {
        return Err(Error::SizeError(format!("n = {n} is not a power of two")));
    }
    if (n as i64) < 8 * (l.abs() + 1) {
        return Err(Error::SizeError(format!(
            "n = {n} below 8 (|l| + 1) for l = {l}"
        )));
    }
    let a = fourier_coeffs(params, n)?;
    let idx = |k: i64| -> f64 { a[k.rem_euclid(n as i64) as usize] };
    Ok([[0.0, idx(l)], [-idx(-l), 0.0]])
}

/// Largest FFT size tried before the finite-L route gives up on a
/// slowly decaying symbol.
const FFT_N_MAX: usize = 1 << 21;

/// Assemble B_L with the default settings (FFT size from max(1024, 8L),
/// L <= 512).
pub fn build_b(l: usize, params: &ModelParams) -> Result<CorrelationMatrix> {
    build_b_with(l, params, &Settings::default())
}

/// Assemble B_L with explicit settings.
///
/// The FFT size starts at max(1024, 8L) rounded up to a power of two and
/// doubles until the aliasing guard is satisfied; the coefficient decay rate
/// is set by the symbol's singularity moduli, which approach 1 both near the
/// phase boundaries and for gamma near 0 or 1. Only parameters that stay
/// unresolved at 2^21 samples are refused.
pub fn build_b_with(
    l: usize,
    params: &ModelParams,
    settings: &Settings,
) -> Result<CorrelationMatrix> {
    if l == 0 {
        return Err(Error::SizeError("block length L must be positive".into()));
    }
    if l > settings.l_max {
        return Err(Error::SizeError(format!(
            "block length L = {l} exceeds l_max = {}",
            settings.l_max
        )));
    }
    let mut n = (8 * l).max(1024).next_power_of_two();
    let a = loop {
        match fourier_coeffs(params, n) {
            Ok(a) => break a,
            Err(e @ Error::ConvergenceError(_)) => {
                if n >= FFT_N_MAX {
                    return Err(e);
                }
                n *= 2;
            }
            Err(e) => return Err(e),
        }
    };
    let idx = |k: i64| -> f64 { a[k.rem_euclid(n as i64) as usize] };
    let dim = 2 * l;
    let mut data = vec![0.0; dim * dim];
    for j in 0..l {
        for k in 0..l {
            let d = j as i64 - k as i64;
            data[(2 * j) * dim + (2 * k + 1)] = idx(d);
            data[(2 * j + 1) * dim + (2 * k)] = -idx(-d);
        }
    }
    Ok(CorrelationMatrix { l, data })
}

/// Antisymmetric spectrum of B_L via the Hermitian eigenproblem of i B_L.
///
/// The eigenvalues of i B_L come in pairs +-nu_m; they are matched from the
/// two ends of the sorted spectrum and must cancel to within 1e-9, and no
/// nu_m may exceed 1 + 1e-8.
pub fn spectrum_nu(b: &CorrelationMatrix) -> Result<SpectrumResult> {
    let l = b.l;
    let dim = 2 * l;
    let ib: Mat<Complex64> = Mat::from_fn(dim, dim, |i, j| Complex64::new(0.0, b.b(i, j)));
    let evs: Vec<f64> = ib
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::NumericalError(format!("eigensolve failed: {e:?}")))?;
    debug_assert!(evs.windows(2).all(|w| w[0] <= w[1]));
    let mut nu = Vec::with_capacity(l);
    for m in 0..l {
        let low = evs[m];
        let high = evs[dim - 1 - m];
        if (low + high).abs() > PAIRING_TOL {
            return Err(Error::NumericalError(format!(
                "eigenvalue pairing broke: {low} + {high} = {}",
                low + high
            )));
        }
        let v = 0.5 * (high - low);
        if v > 1.0 + NU_OVERSHOOT_MAX {
            return Err(Error::NumericalError(format!(
                "nu = {v} exceeds 1 beyond tolerance"
            )));
        }
        nu.push(v.clamp(0.0, 1.0));
    }
    // ends-inward matching yields descending order already
    debug_assert!(nu.windows(2).all(|w| w[0] >= w[1]));
    Ok(SpectrumResult { nu })
}

/// Exact block entropy S_L = sum_m H(nu_m) by the finite-L route.
pub fn entropy_exact(l: usize, params: &ModelParams) -> Result<EntropyResult> {
    entropy_exact_with(l, params, &Settings::default())
}

/// [`entropy_exact`] with explicit settings.
pub fn entropy_exact_with(
    l: usize,
    params: &ModelParams,
    settings: &Settings,
) -> Result<EntropyResult> {
    let b = build_b_with(l, params, settings)?;
    let spec = spectrum_nu(&b)?;
    let mut s = 0.0;
    for &v in &spec.nu {
        s += binary_entropy(v)?;
    }
    Ok(EntropyResult {
        value: s,
        method: Method::ExactFiniteL,
        // dense-eigensolve floating-point scale
        err_estimate: 2.0 * (l as f64) * 1e-15,
    })
}

/// Exact characteristic determinant
///
/// ```text
///   D_L(lambda) = det(i lambda I - B_L) = (-1)^L prod_m (lambda^2 - nu_m^2).
/// ```
///
/// Real lambda yields an exactly real result. The plain product overflows
/// f64 for |lambda| > 1 at L of a few hundred; use [`log_det_exact`] there.
pub fn det_exact(lambda: Complex64, spec: &SpectrumResult) -> Complex64 {
    let l = spec.nu.len();
    let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    if lambda.im == 0.0 {
        let x = lambda.re;
        let mut p = sign;
        for &v in &spec.nu {
            p *= x * x - v * v;
        }
        Complex64::new(p, 0.0)
    } else {
        let l2 = lambda * lambda;
        let mut p = Complex64::new(sign, 0.0);
        for &v in &spec.nu {
            p *= l2 - v * v;
        }
        p
    }
}

/// Logarithmic form of [`det_exact`]: real part ln |D_L(lambda)|, imaginary
/// part the accumulated phase (principal branch per factor, plus i pi L).
pub fn log_det_exact(lambda: Complex64, spec: &SpectrumResult) -> Complex64 {
    let l = spec.nu.len();
    let l2 = lambda * lambda;
    let mut acc = Complex64::new(0.0, std::f64::consts::PI * l as f64);
    for &v in &spec.nu {
        acc += (l2 - v * v).ln();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(got: f64, want: f64, tol: f64, label: &str) {
        assert!(
            (got - want).abs() <= tol,
            "{label}: got {got}, want {want} (tol {tol})"
        );
    }

    fn params() -> ModelParams {
        ModelParams::new(0.5, 1.0).unwrap()
    }

    #[test]
    fn binary_entropy_reference_points() {
        assert_close(
            binary_entropy(0.0).unwrap(),
            std::f64::consts::LN_2,
            0.0,
            "H(0)",
        );
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0, "H(1)");
        assert_eq!(binary_entropy(-1.0).unwrap(), 0.0, "H(-1)");
        assert_close(
            binary_entropy(0.5).unwrap(),
            0.5623351446188083,
            1e-15,
            "H(0.5)",
        );
        let a = binary_entropy(0.73).unwrap();
        let b = binary_entropy(-0.73).unwrap();
        assert_eq!(a, b, "even");
        assert!(matches!(binary_entropy(1.1), Err(Error::DomainError(_))));
        assert!(matches!(
            binary_entropy(f64::NAN),
            Err(Error::DomainError(_))
        ));
        // overshoot within clamp band
        assert_eq!(binary_entropy(1.0 + 5e-13).unwrap(), 0.0);
    }

    #[test]
    fn fourier_pi_block_structure() {
        let p = params();
        for l in 0..=5i64 {
            let pi_l = fourier_pi(l, &p, 1024).unwrap();
            let pi_ml = fourier_pi(-l, &p, 1024).unwrap();
            assert_eq!(pi_l[0][0], 0.0);
            assert_eq!(pi_l[1][1], 0.0);
            // Pi_{-l} = -Pi_l^T
            assert_close(pi_ml[0][1], -pi_l[1][0], 1e-15, "transpose link 01");
            assert_close(pi_ml[1][0], -pi_l[0][1], 1e-15, "transpose link 10");
        }
    }

    #[test]
    fn fourier_pi_size_checks() {
        let p = params();
        assert!(matches!(fourier_pi(0, &p, 1000), Err(Error::SizeError(_))));
        assert!(matches!(fourier_pi(3, &p, 16), Err(Error::SizeError(_))));
    }

    #[test]
    fn build_b_matches_blocks_and_is_antisymmetric() {
        let p = params();
        let b = build_b(4, &p).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(b.b(i, j), -b.b(j, i), "antisymmetry at ({i},{j})");
            }
        }
        for (j, k) in [(0usize, 0usize), (2, 0), (0, 3), (3, 1)] {
            let blk = fourier_pi(j as i64 - k as i64, &p, 1024).unwrap();
            for (r, row) in blk.iter().enumerate() {
                for (c, &want) in row.iter().enumerate() {
                    assert_close(b.b(2 * j + r, 2 * k + c), want, 1e-15, "block entry");
                }
            }
        }
    }

    #[test]
    fn build_b_size_limits() {
        let p = params();
        assert!(matches!(build_b(0, &p), Err(Error::SizeError(_))));
        assert!(matches!(build_b(513, &p), Err(Error::SizeError(_))));
        let tight = Settings {
            l_max: 4,
            ..Settings::default()
        };
        assert!(matches!(
            build_b_with(5, &p, &tight),
            Err(Error::SizeError(_))
        ));
    }

    #[test]
    fn near_critical_symbol_is_refused() {
        // At h = 2 - 1e-5 the coefficient decay rate ~5e-6 cannot be resolved
        // even at the 2^21 cap; the finite-L route must refuse rather than
        // alias. At h = 1.999 the adaptive grid growth resolves it.
        let p = ModelParams::new(0.5, 2.0 - 1e-5).unwrap();
        assert!(matches!(build_b(8, &p), Err(Error::ConvergenceError(_))));
        let p = ModelParams::new(0.5, 1.999).unwrap();
        assert!(build_b(4, &p).is_ok());
    }

    #[test]
    fn l1_spectrum_is_the_zeroth_coefficient() {
        let p = params();
        let a0 = fourier_pi(0, &p, 1024).unwrap()[0][1];
        let b = build_b(1, &p).unwrap();
        let spec = spectrum_nu(&b).unwrap();
        assert_eq!(spec.nu.len(), 1);
        assert_close(spec.nu[0], a0.abs(), 1e-12, "nu_0 = |a_0| at L = 1");
    }

    #[test]
    fn spectrum_in_range_and_descending() {
        let p = params();
        let b = build_b(12, &p).unwrap();
        let spec = spectrum_nu(&b).unwrap();
        assert_eq!(spec.nu.len(), 12);
        for w in spec.nu.windows(2) {
            assert!(w[0] >= w[1], "descending");
        }
        for &v in &spec.nu {
            assert!((0.0..=1.0).contains(&v), "nu in [0, 1]: {v}");
        }
    }

    #[test]
    fn entropy_grows_with_block_length_here() {
        let p = params();
        let s1 = entropy_exact(1, &p).unwrap().value;
        let s8 = entropy_exact(8, &p).unwrap().value;
        assert!(s1 > 0.0 && s8 > s1, "s1={s1}, s8={s8}");
        assert_eq!(entropy_exact(8, &p).unwrap().method, Method::ExactFiniteL);
    }

    #[test]
    fn det_exact_small_cases() {
        let p = params();
        let b = build_b(1, &p).unwrap();
        let spec = spectrum_nu(&b).unwrap();
        let nu = spec.nu[0];
        let lam = Complex64::new(2.0, 0.0);
        let d = det_exact(lam, &spec);
        assert_close(d.re, -(4.0 - nu * nu), 1e-14, "L=1 determinant");
        assert_eq!(d.im, 0.0, "real lambda gives real determinant");
        // complex lambda against the defining product
        let lam = Complex64::new(0.3, 1.7);
        let d = det_exact(lam, &spec);
        let want = -(lam * lam - nu * nu);
        assert!((d - want).norm() <= 1e-14 * want.norm());
    }

    #[test]
    fn det_exact_large_lambda_normalization() {
        let p = params();
        let b = build_b(5, &p).unwrap();
        let spec = spectrum_nu(&b).unwrap();
        let lam = Complex64::new(1e6, 0.0);
        let d = det_exact(lam, &spec);
        let ratio = d.re / 1e6f64.powi(10);
        assert_close(ratio, -1.0, 1e-10, "D / lambda^{2L} -> (-1)^L");
    }

    #[test]
    fn log_det_matches_det() {
        let p = params();
        let b = build_b(5, &p).unwrap();
        let spec = spectrum_nu(&b).unwrap();
        for lam in [Complex64::new(2.0, 0.0), Complex64::new(0.4, 1.1)] {
            let d = det_exact(lam, &spec);
            let ld = log_det_exact(lam, &spec);
            assert_close(ld.re, d.norm().ln(), 1e-12, "log magnitude");
        }
    }
}
