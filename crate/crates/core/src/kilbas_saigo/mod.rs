//! The Kilbas-Saigo function
//! E_{a,m,l}(z) = 1 + Σ_{n≥1} c_n z^n,
//! c_n = ∏_{k=1}^n Γ(1+a((k−1)m+l)) / Γ(1+a((k−1)m+l+1)).

mod coeffs;
mod eval;
mod mellin;

pub(crate) use coeffs::ln_factor_bound;
pub use coeffs::{ks_coefficients, AppendixBound, CoefficientTable};
pub use eval::{
    ks_asymptotic, ks_bounds, ks_derivative, ks_eval, ks_eval_complex, Certified, KsFunction,
    Route, DEFAULT_TOLERANCE, MAX_DERIVATIVE_ORDER,
};
pub(crate) use mellin::GRatio;
pub use mellin::{ks_mellin, MellinSurvival};

use crate::error::{param, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsParams {
    a: f64,
    m: f64,
    l: f64,
}

impl KsParams {
    pub fn new(a: f64, m: f64, l: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(param(format!("a must lie in (0, 1], got {a}")));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(param(format!("m must be positive, got {m}")));
        }
        if !(l.is_finite() && l > -1.0 / a) {
            return Err(param(format!("l must exceed -1/a = {}, got {l}", -1.0 / a)));
        }
        Ok(KsParams { a, m, l })
    }

    /// Parameters (α, 1 + γ/α, γ/α) of the stretched relaxation function.
    pub fn stretched(alpha: f64, gamma: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(param(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(alpha + gamma > 0.0) {
            return Err(param(format!("alpha + gamma must be positive, got {}", alpha + gamma)));
        }
        Self::new(alpha, 1.0 + gamma / alpha, gamma / alpha)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn tau(&self) -> f64 {
        1.0 / (self.a * self.m)
    }

    pub fn phi(&self) -> f64 {
        (1.0 + self.a * self.l) * self.tau()
    }

    /// Regime l ≥ m − 1/a in which x ↦ E(−x) is completely monotone.
    pub fn is_completely_monotone(&self) -> bool {
        self.l >= self.m - 1.0 / self.a - 1e-12
    }

    /// Argument 1 + a((k−1)m + l) of the numerator gamma in the k-th factor.
    pub(crate) fn factor_arg(&self, k: usize) -> f64 {
        1.0 + self.a * ((k as f64 - 1.0) * self.m + self.l)
    }
}
