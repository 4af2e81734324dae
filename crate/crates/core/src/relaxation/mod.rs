//! The stretched operator D^(α,γ) = t^{−γ}·(Caputo derivative of order α)
//! acting on series Σ f_n t^{ρn}, ρ = α+γ, and the relaxation equations
//!
//!   D f + κ f = 0,            D D f + a D f + b f = 0.
//!
//! On t^{ρn} the operator acts as D t^{ρn} = [n]^ρ_α t^{ρ(n−1)}, with
//! [n]^β_α = Γ(βn+1)/Γ(βn−α+1), and [n!]^ρ_α = ∏_{k≤n}[k]^ρ_α = 1/c_n for the
//! stretched Kilbas-Saigo coefficients c_n.

mod second;
mod series;

pub use second::{second_order_recurrence, solve_second_order, RootCase, SecondOrderSpec};
pub use series::{apply_operator_to_series, series_residual, solve_first_order, SeriesSolution, VALIDITY_TOLERANCE};

use crate::error::{param, Result};
use crate::kilbas_saigo::KsParams;
use crate::specfun::{gamma_ratio, ln_gamma_shift};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StretchedModel {
    alpha: f64,
    gamma: f64,
    lambda: f64,
    ks: KsParams,
}

impl StretchedModel {
    /// α ∈ (0, 1] (α = 1 gives the classical first-order operator), α+γ > 0,
    /// λ > 0.
    pub fn new(alpha: f64, gamma: f64, lambda: f64) -> Result<Self> {
        if !(gamma.is_finite()) {
            return Err(param(format!("gamma must be finite, got {gamma}")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(param(format!("lambda must be positive, got {lambda}")));
        }
        let ks = KsParams::stretched(alpha, gamma)?;
        Ok(StretchedModel { alpha, gamma, lambda, ks })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// ρ = α + γ.
    pub fn rho(&self) -> f64 {
        self.alpha + self.gamma
    }

    /// α + γ ≤ 1: the relaxation function is completely monotone and the
    /// counting-process pmfs are defined.
    pub fn cm_regime(&self) -> bool {
        self.rho() <= 1.0
    }

    pub fn ks_params(&self) -> KsParams {
        self.ks
    }

    /// Same orders, different rate.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.alpha, self.gamma, lambda)
    }
}

/// [n]^β_α = Γ(βn+1)/Γ(βn−α+1).
pub fn bracket(n: usize, beta: f64, alpha: f64) -> Result<f64> {
    gamma_ratio(beta * n as f64 + 1.0, beta * n as f64 - alpha + 1.0)
}

/// [n]^ρ_α for the model's own ρ; zero for n = 0 (constants are annihilated).
pub fn model_bracket(model: &StretchedModel, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let x = (n as f64 - 1.0) * model.rho() + model.gamma() + 1.0;
    Ok(ln_gamma_shift(x, model.alpha())?.exp())
}

/// [n!]^β_α = ∏_{k=1}^n [k]^β_α.
pub fn bracket_factorial(n: usize, beta: f64, alpha: f64) -> Result<f64> {
    let mut p = 1.0;
    for k in 1..=n {
        p *= bracket(k, beta, alpha)?;
    }
    Ok(p)
}

/// Governing equation used by residual checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equation {
    /// D f + κ f = 0
    FirstOrder { kappa: f64 },
    /// D D f + a D f + b f = 0
    SecondOrder { a: f64, b: f64 },
}
