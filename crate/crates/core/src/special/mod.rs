//! Real-argument special functions: gamma, log-gamma, digamma, Bernoulli
//! numbers, the Hurwitz zeta function ζ(s, a) continued to every real
//! s ≠ 1, and the alternating Hurwitz zeta ζ̃(s, a) on the whole real line.
//!
//! | Function | Description |
//! |----------|-------------|
//! | [`gamma`] | Γ(s) for real s off the poles |
//! | [`ln_gamma`] | ln Γ(s), s > 0 |
//! | [`digamma`] | ψ(s) = Γ'(s)/Γ(s), s > 0 |
//! | [`bernoulli_numbers`] | B_0..B_N with B_1 = −1/2 |
//! | [`hurwitz_zeta`] | ζ(s, a), s ≠ 1 |
//! | [`hurwitz_zeta_near_pole`] | ζ(s, a) − 1/(s − 1), continuous at s = 1 |
//! | [`alt_hurwitz_zeta`] | ζ̃(s, a) = Σ (−1)^k (k + a)^(−s) |
//! | [`hurwitz_formula_oracle`] | Hurwitz's Fourier series for s < 0, a ∈ (0, 1] |

mod bernoulli;
mod gamma;
mod quadrature;
mod zeta;

use thiserror::Error;

pub use bernoulli::{bernoulli_numbers, BernoulliTable};
pub(crate) use bernoulli::{shared as shared_bernoulli, SHARED_BERNOULLI_MAX};
pub use gamma::{digamma, gamma, ln_gamma, sin_pi};
pub use zeta::{
    alt_hurwitz_zeta, alt_hurwitz_zeta_estimate, hurwitz_formula_oracle, hurwitz_zeta, hurwitz_zeta_estimate,
    hurwitz_zeta_near_pole, POLE_GUARD,
};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Errors raised by the special functions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("pole at s={s}: use hurwitz_zeta_near_pole for |s - 1| < {POLE_GUARD:e}")]
    ZetaPole { s: f64 },
    #[error("gamma pole at nonpositive integer s={0}")]
    GammaPole(f64),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Accuracy target and summation budget shared by every evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    /// Target absolute error.
    pub abs_tol: f64,
    /// Cap on the number of summed terms.
    pub max_terms: usize,
}

impl Precision {
    pub const DEFAULT_TOL: f64 = 1e-10;
    pub const DEFAULT_MAX_TERMS: usize = 20_000_000;

    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self, SpecialError> {
        if !(abs_tol > 0.0) || !abs_tol.is_finite() {
            return Err(SpecialError::Domain(format!("abs_tol must be > 0, got {abs_tol}")));
        }
        if max_terms == 0 {
            return Err(SpecialError::Domain("max_terms must be >= 1".into()));
        }
        Ok(Self { abs_tol, max_terms })
    }

    pub fn with_tol(abs_tol: f64) -> Self {
        Self::new(abs_tol, Self::DEFAULT_MAX_TERMS).expect("invalid tolerance")
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self { abs_tol: Self::DEFAULT_TOL, max_terms: Self::DEFAULT_MAX_TERMS }
    }
}

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx {
    pub value: f64,
    pub abs_error: f64,
}
