//! Mean and variance of N^L(t).

use super::mc::{laskin_counts, mean_and_std_error};
use super::zsampler::{z_mean, ZSampler};
use super::RngStream;
use crate::error::{param, Error, Result};
use crate::relaxation::StretchedModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
    /// The constant A_{α,γ} in the t^{2ρ} term of the variance.
    pub product_constant: f64,
    /// Standard error of the Monte Carlo mean; `None` for analytic summaries.
    pub mc_std_error: Option<f64>,
}

/// Depth limit for the partial products of A_{α,γ}.
pub const PRODUCT_MAX_DEPTH: usize = 1 << 20;
pub const PRODUCT_TOLERANCE: f64 = 1e-12;

/// A_{α,γ} = ∏ₙ f(n) − 1 with
/// f(n) = (α(n+1) + γ + (2γ+n+1)(ρ+n)) / ((ρ+n)(α+2γ+n+1)).
///
/// Partial products up to N carry an Euler-Maclaurin estimate of
/// Σ_{n≥N} ln f(n); N doubles until three successive estimates agree to
/// [`PRODUCT_TOLERANCE`].
pub fn product_constant(alpha: f64, gamma: f64) -> Result<f64> {
    let rho = alpha + gamma;
    if !(alpha > 0.0 && alpha <= 1.0 && rho > 0.0) {
        return Err(param(format!("need 0 < alpha <= 1 and alpha + gamma > 0, got ({alpha}, {gamma})")));
    }
    if alpha == 1.0 {
        // every factor is exactly 1
        return Ok(0.0);
    }
    let ln_f = |n: f64| ((1.0 - alpha) * rho / ((rho + n) * (rho + gamma + n + 1.0))).ln_1p();
    // f(x) = (x+2ρ)(x+γ+1)/((x+ρ)(x+ρ+γ+1)); signed shifts of the four logs
    let shifts = [(1.0, 2.0 * rho), (1.0, gamma + 1.0), (-1.0, rho), (-1.0, rho + gamma + 1.0)];
    let tail = |x: f64| {
        // ∫ₓ^∞ ln f = −Σ± (x+c) ln(1 + c/x); the Σ± (x+c) ln x part vanishes
        let integral: f64 = -shifts.iter().map(|&(s, c)| s * (x + c) * (c / x).ln_1p()).sum::<f64>();
        let d1: f64 = shifts.iter().map(|&(s, c)| s / (x + c)).sum();
        let d3: f64 = shifts.iter().map(|&(s, c)| 2.0 * s / (x + c).powi(3)).sum();
        integral + 0.5 * ln_f(x) - d1 / 12.0 + d3 / 720.0
    };
    let mut sum = 0.0;
    let mut n = 0usize;
    let mut depth = 16usize;
    let mut history: Vec<f64> = Vec::new();
    while depth <= PRODUCT_MAX_DEPTH {
        while n < depth {
            sum += ln_f(n as f64);
            n += 1;
        }
        // logs of the product: agreement here is relative agreement of the product
        history.push(sum + tail(depth as f64));
        if let [.., a, b, c] = history[..] {
            if (a - b).abs() <= PRODUCT_TOLERANCE && (b - c).abs() <= PRODUCT_TOLERANCE {
                // each factor exceeds 1, so A ≥ 0 up to rounding
                return Ok(c.exp_m1().max(0.0));
            }
        }
        depth *= 2;
    }
    Err(Error::NonConvergence {
        what: "A_{alpha,gamma} product",
        detail: format!("partial products still moving at depth {PRODUCT_MAX_DEPTH}"),
    })
}

/// E N^L(t) = λΓ(γ+1)/Γ(ρ+1)·t^ρ and
/// Var N^L(t) = E N^L(t) + (λΓ(γ+1)/Γ(ρ+1))² A_{α,γ} t^{2ρ}.
pub fn moments_laskin_analytic(model: &StretchedModel, t: f64) -> Result<MomentSummary> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(param(format!("t must be nonnegative, got {t}")));
    }
    let a = product_constant(model.alpha(), model.gamma())?;
    let m1 = model.lambda() * z_mean(model)? * t.powf(model.rho());
    Ok(MomentSummary { mean: m1, variance: m1 + m1 * m1 * a, product_constant: a, mc_std_error: None })
}

/// Sample mean and variance of `draws` simulated N^L(t).
pub fn moments_laskin_mc(sampler: &dyn ZSampler, t: f64, draws: usize, root: &RngStream) -> Result<MomentSummary> {
    if draws < 2 {
        return Err(param("Monte Carlo moments need at least two draws"));
    }
    let m = sampler.model();
    let a = product_constant(m.alpha(), m.gamma())?;
    let counts: Vec<f64> = laskin_counts(sampler, t, draws, root)?.into_iter().map(|c| c as f64).collect();
    let (mean, se) = mean_and_std_error(&counts);
    let var = se * se * draws as f64;
    Ok(MomentSummary { mean, variance: var, product_constant: a, mc_std_error: Some(se) })
}

pub enum MomentMode<'a> {
    Analytic,
    MonteCarlo { sampler: &'a dyn ZSampler, draws: usize, rng: &'a RngStream },
}

pub fn moments_laskin(model: &StretchedModel, t: f64, mode: MomentMode<'_>) -> Result<MomentSummary> {
    match mode {
        MomentMode::Analytic => moments_laskin_analytic(model, t),
        MomentMode::MonteCarlo { sampler, draws, rng } => moments_laskin_mc(sampler, t, draws, rng),
    }
}
