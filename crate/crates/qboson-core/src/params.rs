//! Deformation parameters `(q, α, β)` and the series budget.
//!
//! The triple governs every formula in the crate: the q-bracket
//! `[X]_q = (q^X − q^{−X})/(q − q^{−1})`, the shifted number operator
//! `Ñ = N + β/α`, and all deformed special functions. `q` is a runtime
//! value, never a compile-time constant, and `q = 1` is approached through
//! a small guard radius rather than symbolically.

use alloc::format;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Default guard radius around `q = 1`.
pub const DEFAULT_CLASSICAL_GUARD: f64 = 1e-8;

/// The deformation triple `(q, α, β)` plus the guard radius for `q → 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParams {
    q: f64,
    alpha: f64,
    beta: f64,
    classical_guard: f64,
}

impl DeformationParams {
    /// Validates and builds the parameter set with the default guard.
    pub fn new(q: f64, alpha: f64, beta: f64) -> Result<Self> {
        Self::with_guard(q, alpha, beta, DEFAULT_CLASSICAL_GUARD)
    }

    /// Validates and builds the parameter set with an explicit guard radius.
    pub fn with_guard(q: f64, alpha: f64, beta: f64, classical_guard: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParams(format!("q must be positive, got {q}")));
        }
        if !(alpha.is_finite() && alpha != 0.0) {
            return Err(Error::InvalidParams(format!(
                "alpha must be nonzero (Ñ = N + β/α), got {alpha}"
            )));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "beta must be finite, got {beta}"
            )));
        }
        if !(classical_guard > 0.0 && classical_guard < 1e-4) {
            return Err(Error::InvalidParams(format!(
                "classical guard must lie in (0, 1e-4), got {classical_guard}"
            )));
        }
        Ok(Self {
            q,
            alpha,
            beta,
            classical_guard,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn classical_guard(&self) -> f64 {
        self.classical_guard
    }

    /// The shift `β/α` entering `Ñ = N + β/α`.
    pub fn beta_ratio(&self) -> f64 {
        self.beta / self.alpha
    }

    pub fn ln_q(&self) -> f64 {
        self.q.ln()
    }

    /// `q − q^{−1}`, the q-bracket denominator.
    pub fn q_diff(&self) -> f64 {
        self.q - 1.0 / self.q
    }

    /// `q^{α/2} + q^{−α/2}`, the denominator of box numbers and of `[[X]]`.
    pub fn u(&self) -> f64 {
        let h = self.q.powf(self.alpha / 2.0);
        h + 1.0 / h
    }

    /// `ϖ = π/(q^{α/2} + q^{−α/2})`.
    pub fn varpi(&self) -> f64 {
        PI / self.u()
    }

    /// `[[X]] = (q^X + q^{−X})/(q^{α/2} + q^{−α/2})`.
    pub fn double_bracket(&self, x: f64) -> f64 {
        let p = self.q.powf(x);
        (p + 1.0 / p) / self.u()
    }

    /// `q^α`, the base of the curly brackets `{n}_{q^α}`.
    pub fn q_alpha(&self) -> f64 {
        self.q.powf(self.alpha)
    }

    /// Whether `q` sits inside the guard radius around the classical point.
    pub fn is_classical(&self) -> bool {
        (self.q - 1.0).abs() <= self.classical_guard
    }

    /// The sign-flipped parameter set `(−α, β−α)` entering negative-argument
    /// box numbers and the radial measure.
    pub fn flipped(&self) -> Self {
        Self {
            q: self.q,
            alpha: -self.alpha,
            beta: self.beta - self.alpha,
            classical_guard: self.classical_guard,
        }
    }

    /// `α ln q + iπ`, the structure constant of `[z, x]` in the dual algebra.
    pub fn c_plus(&self) -> Complex64 {
        Complex64::new(self.alpha * self.ln_q(), PI)
    }

    /// `α ln q − iπ`, the structure constant of `[z, y]` in the dual algebra.
    pub fn c_minus(&self) -> Complex64 {
        Complex64::new(self.alpha * self.ln_q(), -PI)
    }
}

/// Termination control for scalar series.
///
/// Summation stops once the term magnitude drops below `tail_tolerance` for
/// two consecutive terms; exhausting `max_terms` without that happening is an
/// error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarSeriesBudget {
    pub max_terms: usize,
    pub tail_tolerance: f64,
}

impl ScalarSeriesBudget {
    pub fn new(max_terms: usize, tail_tolerance: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::InvalidParams("max_terms must be positive".into()));
        }
        if tail_tolerance <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "tail tolerance must be positive, got {tail_tolerance}"
            )));
        }
        Ok(Self {
            max_terms,
            tail_tolerance,
        })
    }
}

impl Default for ScalarSeriesBudget {
    fn default() -> Self {
        Self {
            max_terms: 200,
            tail_tolerance: 1e-14,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(DeformationParams::new(-1.0, 2.0, 1.0).is_err());
        assert!(DeformationParams::new(0.0, 2.0, 1.0).is_err());
        assert!(DeformationParams::new(1.2, 0.0, 1.0).is_err());
        assert!(DeformationParams::with_guard(1.2, 2.0, 1.0, 1e-3).is_err());
        assert!(DeformationParams::with_guard(1.2, 2.0, 1.0, 0.0).is_err());
        assert!(DeformationParams::new(1.2, 2.0, 1.0).is_ok());
    }

    #[test]
    fn derived_constants() {
        let p = DeformationParams::new(4.0, 2.0, 1.0).unwrap();
        assert!((p.u() - 4.25).abs() < 1e-15);
        assert!((p.varpi() - PI / 4.25).abs() < 1e-15);
        assert!((p.beta_ratio() - 0.5).abs() < 1e-15);
        assert!((p.double_bracket(0.0) - 2.0 / 4.25).abs() < 1e-15);
        let f = p.flipped();
        assert_eq!(f.alpha(), -2.0);
        assert_eq!(f.beta(), -1.0);
    }

    #[test]
    fn budget_defaults() {
        let b = ScalarSeriesBudget::default();
        assert_eq!(b.max_terms, 200);
        assert_eq!(b.tail_tolerance, 1e-14);
        assert!(ScalarSeriesBudget::new(0, 1e-10).is_err());
    }
}
