//! Model parameters, phase classification, and the symbol of the correlation
//! operator.
//!
//! The anisotropic XY chain in transverse field h with anisotropy gamma has
//! three off-critical regions in the (gamma, h) quarter-plane:
//!
//! * Case 1a: 2 sqrt(1 - gamma^2) < h < 2,
//! * Case 1b: 0 < h < 2 sqrt(1 - gamma^2),
//! * Case 2:  h > 2,
//!
//! separated by the critical lines h = 2 (vanishing gap) and
//! h = 2 sqrt(1 - gamma^2) (where the ground state is doubly degenerate and
//! the four branch points collide pairwise on the unit circle). All
//! asymptotic machinery keys off the four branch points lambda_A..lambda_D
//! of the elliptic curve w^2 = prod (z - lambda_i), ordered along the curve
//! so that J1 = [lambda_A, lambda_B] lies inside the unit disk and
//! J2 = [lambda_C, lambda_D] outside.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::Settings;

/// Hard floor on the symbol modulus before the factorization is declared
/// degenerate. Only reachable in an eps_phase-neighborhood of criticality.
const SYMBOL_MODULUS_FLOOR: f64 = 1e-14;

/// Validated model parameters: anisotropy gamma in (0, 1), field h > 0,
/// at distance >= eps_phase from both critical lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub gamma: f64,
    pub h: f64,
}

impl ModelParams {
    /// Validate with the default `eps_phase` of [`Settings`].
    pub fn new(gamma: f64, h: f64) -> Result<Self> {
        Self::new_with(gamma, h, Settings::default().eps_phase)
    }

    /// Validate with an explicit phase-boundary exclusion width.
    pub fn new_with(gamma: f64, h: f64, eps_phase: f64) -> Result<Self> {
        if !gamma.is_finite() || !h.is_finite() {
            return Err(Error::DomainError(format!(
                "parameters must be finite, got gamma={gamma}, h={h}"
            )));
        }
        if gamma <= 0.0 || gamma >= 1.0 {
            return Err(Error::DomainError(format!(
                "gamma must lie strictly inside (0, 1), got {gamma}"
            )));
        }
        if h <= 0.0 {
            return Err(Error::DomainError(format!("h must be positive, got {h}")));
        }
        let h_gamma = 2.0 * (1.0 - gamma * gamma).sqrt();
        if (h - 2.0).abs() < eps_phase {
            return Err(Error::PhaseBoundary(format!(
                "h={h} within {eps_phase} of the critical line h = 2"
            )));
        }
        if (h - h_gamma).abs() < eps_phase {
            return Err(Error::PhaseBoundary(format!(
                "h={h} within {eps_phase} of the line h = 2 sqrt(1 - gamma^2) = {h_gamma}"
            )));
        }
        Ok(ModelParams { gamma, h })
    }
}

/// Off-critical region of the phase diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    Case1a,
    Case1b,
    Case2,
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Case::Case1a => write!(f, "1a"),
            Case::Case1b => write!(f, "1b"),
            Case::Case2 => write!(f, "2"),
        }
    }
}

/// Phase region plus the branch-point data of the elliptic curve.
///
/// Invariants established by [`classify`]:
/// * Case 1a, 2: lambda1, lambda2 real with 0 < lambda1 < lambda2 and
///   lambda2 = lambda1 (1+gamma)/(1-gamma).
/// * Case 1b: lambda1 in the lower half-plane with
///   |lambda1|^2 = (1-gamma)/(1+gamma), lambda2 = 1/conj(lambda1).
/// * J1 = [lambda_a, lambda_b] lies inside the open unit disk,
///   J2 = [lambda_c, lambda_d] outside the closed unit disk, except that in
///   Case 1b the cut J2 crosses the unit circle (|lambda_c| = |lambda_d| > 1
///   but the segment passes through h / (2 (1-gamma)) on the real axis).
/// * sigma = 1 in Cases 1a/1b, sigma = 0 in Case 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub case: Case,
    pub sigma: u8,
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    pub lambda_a: Complex64,
    pub lambda_b: Complex64,
    pub lambda_c: Complex64,
    pub lambda_d: Complex64,
}

/// Classify parameters with the default exclusion width.
pub fn classify(params: &ModelParams) -> Result<Regime> {
    classify_with(params, Settings::default().eps_phase)
}

/// Classify parameters into a [`Regime`].
///
/// Re-checks the phase-boundary distance so a `Regime` can never straddle a
/// critical line even if the caller built `ModelParams` with a looser width.
pub fn classify_with(params: &ModelParams, eps_phase: f64) -> Result<Regime> {
    let gamma = params.gamma;
    let h = params.h;
    let h_gamma = 2.0 * (1.0 - gamma * gamma).sqrt();
    if (h - 2.0).abs() < eps_phase || (h - h_gamma).abs() < eps_phase {
        return Err(Error::PhaseBoundary(format!(
            "(gamma, h) = ({gamma}, {h}) within {eps_phase} of a critical line"
        )));
    }

    let one = Complex64::new(1.0, 0.0);
    if h > h_gamma {
        // Cases 1a and 2 share real lambda1 < lambda2.
        let disc = h * h - 4.0 * (1.0 - gamma * gamma);
        let l1 = (h - disc.sqrt()) / (2.0 * (1.0 + gamma));
        let l2 = l1 * (1.0 + gamma) / (1.0 - gamma);
        let (lambda1, lambda2) = (Complex64::new(l1, 0.0), Complex64::new(l2, 0.0));
        if h > 2.0 {
            // Case 2: both lambda1 and lambda2 inside the unit disk.
            Ok(Regime {
                case: Case::Case2,
                sigma: 0,
                lambda1,
                lambda2,
                lambda_a: lambda1,
                lambda_b: lambda2,
                lambda_c: one / lambda2,
                lambda_d: one / lambda1,
            })
        } else {
            // Case 1a: lambda1 < 1/lambda2 < 1 < lambda2 < 1/lambda1.
            Ok(Regime {
                case: Case::Case1a,
                sigma: 1,
                lambda1,
                lambda2,
                lambda_a: lambda1,
                lambda_b: one / lambda2,
                lambda_c: lambda2,
                lambda_d: one / lambda1,
            })
        }
    } else {
        // Case 1b: complex-conjugate branch points; lambda1 taken in the
        // lower half-plane so that J1 runs upward through the unit disk.
        let disc = 4.0 * (1.0 - gamma * gamma) - h * h;
        let lambda1 = Complex64::new(h, -disc.sqrt()) / (2.0 * (1.0 + gamma));
        let lambda2 = one / lambda1.conj();
        Ok(Regime {
            case: Case::Case1b,
            sigma: 1,
            lambda1,
            lambda2,
            lambda_a: lambda1,
            lambda_b: lambda1.conj(),
            lambda_c: one / lambda1,
            lambda_d: lambda2,
        })
    }
}

/// Symbol of the correlation operator on the unit circle:
///
/// ```text
///   g(theta) = (cos theta - i gamma sin theta - h/2) / |same|
/// ```
///
/// Unimodular by construction; g(-theta) = conj(g(theta)).
/// Fails with `Degenerate` if the modulus underflows the factorization floor.
pub fn symbol_g(theta: f64, params: &ModelParams) -> Result<Complex64> {
    let num = Complex64::new(theta.cos() - 0.5 * params.h, -params.gamma * theta.sin());
    let rho = num.norm();
    if rho < SYMBOL_MODULUS_FLOOR {
        return Err(Error::Degenerate(format!(
            "symbol modulus {rho} below floor at theta={theta}"
        )));
    }
    Ok(num / rho)
}

/// Generator of the integrable Fredholm kernel:
///
/// ```text
///   Phi(z) = [[ i lambda,  phi(z)  ],
///             [ -1/phi(z), i lambda ]]   with phi(e^{i theta}) = g(theta).
/// ```
///
/// det Phi = 1 - lambda^2 identically.
/// pre: |z| = 1 within 1e-12.
pub fn generator_phi(
    z: Complex64,
    lambda: Complex64,
    params: &ModelParams,
) -> Result<[[Complex64; 2]; 2]> {
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::DomainError(format!(
            "generator_phi requires |z| = 1, got |z| = {}",
            z.norm()
        )));
    }
    let g = symbol_g(z.arg(), params)?;
    let il = Complex64::new(0.0, 1.0) * lambda;
    Ok([[il, g], [-g.conj(), il]])
}
