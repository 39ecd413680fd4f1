//! Fredholm determinant route: D_L(lambda) = det(I - K) for the integrable
//! kernel acting on L^2 of the unit circle,
//!
//! ```text
//!   K(z, z') = [(z/z')^L - 1] (I_2 - Phi(z')) / (2 pi i (z - z')),
//! ```
//!
//! with Phi the 2x2 symbol generator. The kernel is analytic in both
//! arguments on the circle (the apparent pole at z = z' cancels), so the
//! uniform-node Nystrom discretization converges spectrally in N.

use faer::linalg::solvers::PartialPivLu;
use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{generator_phi, ModelParams};

/// Discretization of the Fredholm operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    /// Block length L >= 0.
    pub l: usize,
    /// Spectral parameter; real lambda in [-1, 1] is on the singular set.
    pub lambda: Complex64,
    pub params: ModelParams,
    /// Number of Nystrom nodes, even and at least 16 L.
    pub n: usize,
}

impl KernelSpec {
    /// invariant: n even, n >= 16 L, n >= 4.
    pub fn new(l: usize, lambda: Complex64, params: ModelParams, n: usize) -> Result<Self> {
        if !lambda.re.is_finite() || !lambda.im.is_finite() {
            return Err(Error::DomainError(format!("lambda = {lambda} not finite")));
        }
        if !n.is_multiple_of(2) || n < 16 * l || n < 4 {
            return Err(Error::SizeError(format!(
                "n = {n} must be even, >= 4, and >= 16 L = {}",
                16 * l
            )));
        }
        Ok(Self {
            l,
            lambda,
            params,
            n,
        })
    }
}

fn mat2_sub(a: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let one = Complex64::new(1.0, 0.0);
    [[one - a[0][0], -a[0][1]], [-a[1][0], one - a[1][1]]]
}

/// Kernel matrix K(z, z') for |z| = |z'| = 1.
///
/// At z = z' (bitwise) the removable singularity is replaced by its limit
/// L (I_2 - Phi(z)) / (2 pi i z).
pub fn kernel_k(z: Complex64, zp: Complex64, spec: &KernelSpec) -> Result<[[Complex64; 2]; 2]> {
    for (name, v) in [("z", z), ("z'", zp)] {
        if (v.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::DomainError(format!(
                "{name} = {v} is not on the unit circle"
            )));
        }
    }
    let m = mat2_sub(generator_phi(zp, spec.lambda, &spec.params)?);
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let factor = if z == zp {
        (spec.l as f64) / (two_pi_i * z)
    } else {
        ((z / zp).powu(spec.l as u32) - 1.0) / (two_pi_i * (z - zp))
    };
    Ok([
        [factor * m[0][0], factor * m[0][1]],
        [factor * m[1][0], factor * m[1][1]],
    ])
}

/// Determinant of a square matrix via partial-pivot LU: the product of U's
/// diagonal times the cycle parity of the row permutation.
fn lu_det(a: &Mat<Complex64>) -> Result<Complex64> {
    let n = a.nrows();
    let lu = PartialPivLu::new(a.as_ref());
    let mut det = Complex64::new(1.0, 0.0);
    for i in 0..n {
        det *= lu.U()[(i, i)];
    }
    let perm = lu.P().arrays().0;
    let mut seen = vec![false; n];
    let mut sign = 1.0f64;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len.is_multiple_of(2) {
            sign = -sign;
        }
    }
    let det = det * sign;
    if !det.re.is_finite() || !det.im.is_finite() {
        return Err(Error::NumericalError("LU determinant overflowed".into()));
    }
    Ok(det)
}

/// Fredholm determinant det(I - K) by Nystrom discretization on N uniform
/// nodes z_j = e^{2 pi i j / N} with trapezoid weights w_j = (2 pi i / N) z_j.
///
/// Agrees with the exact spectral determinant D_L(lambda) up to the
/// discretization error, which decays spectrally in N.
///
/// Fails with `SingularityError` for real lambda in [-1, 1], where D_L can
/// vanish.
pub fn fredholm_det(spec: &KernelSpec) -> Result<Complex64> {
    if spec.lambda.im == 0.0 && spec.lambda.re.abs() <= 1.0 {
        return Err(Error::SingularityError(format!(
            "lambda = {} lies on [-1, 1] where D_L has zeros",
            spec.lambda
        )));
    }
    if spec.l == 0 {
        // (z/z')^0 - 1 = 0: the kernel vanishes identically
        return Ok(Complex64::new(1.0, 0.0));
    }
    let n = spec.n;
    let nf = n as f64;
    let two_pi = 2.0 * std::f64::consts::PI;

    // nodes and the exact phases (z_j / z_k)^L = e^{2 pi i (j - k) L / N}
    let mut nodes = Vec::with_capacity(n);
    let mut pw = Vec::with_capacity(n);
    for j in 0..n {
        nodes.push(Complex64::from_polar(1.0, two_pi * (j as f64) / nf));
        let m = (j * spec.l) % n;
        pw.push(Complex64::from_polar(1.0, two_pi * (m as f64) / nf));
    }

    // G_k = (I_2 - Phi(z_k)) z_k / N collects the weight and the 1/(2 pi i)
    let mut g = Vec::with_capacity(n);
    for &zk in &nodes {
        let m = mat2_sub(generator_phi(zk, spec.lambda, &spec.params)?);
        let scale = zk / nf;
        g.push([
            [m[0][0] * scale, m[0][1] * scale],
            [m[1][0] * scale, m[1][1] * scale],
        ]);
    }

    let dim = 2 * n;
    let a = Mat::from_fn(dim, dim, |row, col| {
        let (j, dj) = (row / 2, row % 2);
        let (k, dk) = (col / 2, col % 2);
        let f = if j == k {
            (spec.l as f64) / nodes[j]
        } else {
            (pw[(n + j - k) % n] - 1.0) / (nodes[j] - nodes[k])
        };
        let delta = if row == col {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        delta - f * g[k][dj][dk]
    });
    lu_det(&a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{build_b, det_exact, spectrum_nu};

    fn spec_for(l: usize, lambda: Complex64, gamma: f64, h: f64, n: usize) -> KernelSpec {
        let params = ModelParams::new(gamma, h).unwrap();
        KernelSpec::new(l, lambda, params, n).unwrap()
    }

    #[test]
    fn spec_validation() {
        let p = ModelParams::new(0.5, 1.0).unwrap();
        let lam = Complex64::new(2.0, 0.0);
        assert!(matches!(
            KernelSpec::new(4, lam, p, 63),
            Err(Error::SizeError(_))
        ));
        assert!(matches!(
            KernelSpec::new(4, lam, p, 32),
            Err(Error::SizeError(_))
        ));
        assert!(KernelSpec::new(4, lam, p, 64).is_ok());
        assert!(matches!(
            KernelSpec::new(1, Complex64::new(f64::NAN, 0.0), p, 16),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn kernel_diagonal_is_the_limit() {
        let spec = spec_for(3, Complex64::new(2.0, 0.0), 0.5, 1.0, 64);
        let z = Complex64::from_polar(1.0, 0.9);
        let kd = kernel_k(z, z, &spec).unwrap();
        let zp = Complex64::from_polar(1.0, 0.9 + 1e-7);
        let kn = kernel_k(z, zp, &spec).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                let d = (kd[r][c] - kn[r][c]).norm();
                assert!(
                    d <= 1e-5 * kd[r][c].norm().max(1.0),
                    "diagonal limit mismatch at ({r},{c}): {d}"
                );
            }
        }
        assert!(matches!(
            kernel_k(Complex64::new(1.1, 0.0), z, &spec),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn l_zero_kernel_vanishes() {
        let spec = spec_for(0, Complex64::new(2.0, 0.0), 0.5, 1.0, 16);
        assert_eq!(fredholm_det(&spec).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn refuses_singular_segment() {
        let spec = spec_for(2, Complex64::new(0.5, 0.0), 0.5, 1.0, 64);
        assert!(matches!(
            fredholm_det(&spec),
            Err(Error::SingularityError(_))
        ));
        // just outside the segment is fine
        let spec = spec_for(2, Complex64::new(1.5, 0.0), 0.5, 1.0, 64);
        assert!(fredholm_det(&spec).is_ok());
    }

    #[test]
    fn matches_exact_determinant() {
        for (gamma, h) in [(0.5, 1.0), (0.5, 1.9), (0.5, 3.0)] {
            let params = ModelParams::new(gamma, h).unwrap();
            for l in [1usize, 3, 5] {
                let spec_nu = spectrum_nu(&build_b(l, &params).unwrap()).unwrap();
                for lam in [Complex64::new(2.0, 0.0), Complex64::new(0.0, 2.0)] {
                    let want = det_exact(lam, &spec_nu);
                    let ks = KernelSpec::new(l, lam, params, 128).unwrap();
                    let got = fredholm_det(&ks).unwrap();
                    assert!(
                        (got - want).norm() <= 1e-8 * want.norm(),
                        "L={l} lambda={lam} ({gamma},{h}): got {got}, want {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn nystrom_converges_spectrally() {
        let params = ModelParams::new(0.5, 1.0).unwrap();
        let l = 4;
        let lam = Complex64::new(2.0, 0.0);
        let want = det_exact(lam, &spectrum_nu(&build_b(l, &params).unwrap()).unwrap());
        let err_at = |n: usize| {
            let ks = KernelSpec::new(l, lam, params, n).unwrap();
            (fredholm_det(&ks).unwrap() - want).norm() / want.norm()
        };
        let e64 = err_at(64);
        let e96 = err_at(96);
        assert!(
            e96 < e64 / 8.0 || e96 < 1e-12,
            "no spectral decay: err(64) = {e64:.3e}, err(96) = {e96:.3e}"
        );
    }
}
