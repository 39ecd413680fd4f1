//! Ground-state block entanglement entropy of the infinite XY spin chain
//!
//! The model is the anisotropic XY chain in a transverse field,
//!
//! ```text
//!   H = -sum_j [ (1+gamma)/2 sx_j sx_{j+1} + (1-gamma)/2 sy_j sy_{j+1} + h/2 sz_j ]
//! ```
//!
//! with anisotropy 0 < gamma < 1 and field h > 0. The von Neumann entropy of a
//! block of L contiguous spins in the ground state is computed by three
//! independent routes:
//!
//! * [`spectrum`]: exact finite-L route. The block correlation matrix B_L is
//!   assembled from Fourier coefficients of the symbol g(theta), its
//!   antisymmetric spectrum {nu_m} extracted by a dense Hermitian eigensolve,
//!   and S_L = sum_m H(nu_m).
//! * [`asympt`]: large-L asymptotics. Period integrals on the elliptic curve
//!   w^2 = prod (z - lambda_i) give the modular parameter tau, and the entropy
//!   follows either from a rapidly convergent zero series or from a
//!   theta-function integral; closed forms in terms of complete elliptic
//!   integrals (Peschel 2004) provide an independent check, as do the critical
//!   scaling laws near h = 2 and the isotropic (XX) limit.
//! * [`fredholm`]: operator route. D_L(lambda) = det(iI lambda - B_L) equals a
//!   Fredholm determinant of an integrable kernel on the unit circle,
//!   discretized by a Nystrom rule.
//!
//! Agreement between the routes at tight tolerances is the correctness
//! argument of the crate; the `acceptance` integration test drives it.
//!
//! All routines are deterministic and single-threaded. Inputs are validated
//! eagerly and failures surface as typed [`Error`] values, never as NaN.

pub mod asympt;
pub mod error;
pub mod fredholm;
pub mod model;
pub mod quad;
pub mod special;
pub mod spectrum;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Tunable tolerances shared across modules. [`Settings::default`] reproduces
/// the documented defaults; every consumer takes `&Settings` in its `_with`
/// variant and the plain functions use the defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    /// Exclusion half-width around the critical lines h = 2 and
    /// h = 2 sqrt(1 - gamma^2).
    pub eps_phase: f64,
    /// Smallest tau0 accepted by the entropy series and integral.
    pub tau0_min: f64,
    /// Absolute tolerance for adaptive quadrature in the period integrals
    /// and the entropy integral.
    pub quad_tol: f64,
    /// Largest block length accepted by the finite-L route.
    pub l_max: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            eps_phase: 1e-8,
            tau0_min: 0.02,
            quad_tol: 1e-10,
            l_max: 512,
        }
    }
}

/// Which route produced an entropy value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Exact finite-L eigensolve of the block correlation matrix.
    ExactFiniteL,
    /// Series over the zeros lambda_m of the asymptotic determinant.
    Series,
    /// Theta-function integral representation.
    Integral,
    /// Closed form in complete elliptic integrals.
    ClosedForm,
    /// Leading small-tau0 (near-critical) asymptote pi/(6 tau0).
    SmallTau,
    /// Critical scaling law at h -> 2.
    CriticalH,
    /// Isotropic-limit law at gamma -> 0, h < 2.
    XXLimit,
}

impl Method {
    /// Stable lowercase tag used in CLI output.
    pub fn tag(self) -> &'static str {
        match self {
            Method::ExactFiniteL => "exact-finite-L",
            Method::Series => "series",
            Method::Integral => "integral",
            Method::ClosedForm => "closed-form",
            Method::SmallTau => "small-tau",
            Method::CriticalH => "critical-h",
            Method::XXLimit => "xx-limit",
        }
    }
}

/// An entropy value labeled with its route and an error estimate.
///
/// `err_estimate` is a rough upper bound on the absolute error of `value`:
/// truncation plus quadrature error for the asymptotic routes, a
/// floating-point scale for the exact and closed-form routes, and the
/// magnitude of the first neglected correction for the limit laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyResult {
    pub value: f64,
    pub method: Method,
    pub err_estimate: f64,
}
