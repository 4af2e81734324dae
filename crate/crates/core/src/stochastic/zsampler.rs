//! Samplers for Z_{α,γ} = ∫₀^∞ (1 − A_α(s))₊^γ ds.

use rand_distr::{Beta, Distribution, StandardNormal};

use super::registry::Registry;
use super::stable::sample_standard_stable;
use super::RngStream;
use crate::error::{param, Error, Result};
use crate::relaxation::StretchedModel;
use crate::specfun::ln_gamma_shift;

pub trait ZSampler: Send + Sync {
    fn name(&self) -> &'static str;
    fn model(&self) -> &StretchedModel;
    fn sample(&self, rng: &mut RngStream) -> Result<f64>;
}

/// Step control for [`PathSampler`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathConfig {
    pub dt: f64,
    /// Halvings of dt near the crossing, one per decade of 1 − A below 0.1.
    pub max_halvings: u32,
    pub max_steps: usize,
}

impl Default for PathConfig {
    fn default() -> Self {
        PathConfig { dt: 1e-3, max_halvings: 8, max_steps: 10_000_000 }
    }
}

/// Simulates A_α on a grid and integrates (1 − A)^γ by the left-endpoint
/// rule up to the first crossing of 1. The crossing step is integrated
/// exactly for A linear between the grid values, which keeps γ < 0 finite.
#[derive(Debug, Clone)]
pub struct PathSampler {
    model: StretchedModel,
    cfg: PathConfig,
}

impl PathSampler {
    pub fn new(model: StretchedModel) -> Self {
        PathSampler { model, cfg: PathConfig::default() }
    }

    pub fn with_config(model: StretchedModel, cfg: PathConfig) -> Result<Self> {
        if !(cfg.dt > 0.0 && cfg.dt.is_finite()) {
            return Err(param(format!("path step must be positive, got {}", cfg.dt)));
        }
        if cfg.max_steps == 0 {
            return Err(param("path step budget must be positive"));
        }
        Ok(PathSampler { model, cfg })
    }

    pub fn config(&self) -> PathConfig {
        self.cfg
    }
}

impl ZSampler for PathSampler {
    fn name(&self) -> &'static str {
        "path"
    }

    fn model(&self) -> &StretchedModel {
        &self.model
    }

    fn sample(&self, rng: &mut RngStream) -> Result<f64> {
        let alpha = self.model.alpha();
        let gamma = self.model.gamma();
        let mut level: f64 = 0.0;
        let mut z = 0.0;
        for _ in 0..self.cfg.max_steps {
            let rem = 1.0 - level;
            let dt = if rem < 0.1 {
                let k = ((0.1 / rem).log10().floor() as u32 + 1).min(self.cfg.max_halvings);
                self.cfg.dt / f64::from(1u32 << k)
            } else {
                self.cfg.dt
            };
            let inc = dt.powf(1.0 / alpha) * sample_standard_stable(alpha, rng);
            if level + inc < 1.0 {
                z += rem.powf(gamma) * dt;
                level += inc;
            } else {
                z += dt / inc * rem.powf(gamma + 1.0) / (gamma + 1.0);
                return Ok(z);
            }
        }
        Err(Error::Budget(format!("Z path did not cross 1 within {} steps", self.cfg.max_steps)))
    }
}

pub const DEFAULT_BETA_FACTORS: usize = 200;

/// Truncated product representation
/// Z =d Γ(γ+1)/Γ(ρ+1) ∏ₙ (γ+n+1)/(ρ+n) · B(1 + n/ρ, (1−α)/ρ).
/// Every factor has mean 1. The omitted factors n ≥ K are replaced by one
/// lognormal variable with mean 1 and the exact second moment of their
/// product.
#[derive(Debug, Clone)]
pub struct BetaProductSampler {
    model: StretchedModel,
    ln_prefactor: f64,
    factors: Vec<(f64, Beta<f64>)>,
    tail_var: f64,
}

/// Σ_{n≥k} ln(1 + v_n), v_n = (1−α)ρ/((ρ+n)(ρ+γ+n+1)).
fn ln_second_moment_tail(alpha: f64, gamma: f64, k: usize) -> f64 {
    let rho = alpha + gamma;
    let v = |n: f64| (1.0 - alpha) * rho / ((rho + n) * (rho + gamma + n + 1.0));
    let stop = k + 20_000;
    let mut s = 0.0;
    for n in (k..stop).rev() {
        s += v(n as f64).ln_1p();
    }
    // Σ_{n≥M} 1/((n+p)(n+q)) ≈ 1/(M + (p+q−1)/2)
    let m = stop as f64;
    s + (1.0 - alpha) * rho / (m + (2.0 * rho + gamma) / 2.0)
}

impl BetaProductSampler {
    pub fn new(model: StretchedModel) -> Result<Self> {
        Self::with_factors(model, DEFAULT_BETA_FACTORS)
    }

    pub fn with_factors(model: StretchedModel, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(param("the Beta product needs at least one factor"));
        }
        let alpha = model.alpha();
        let gamma = model.gamma();
        let rho = model.rho();
        let ln_prefactor = -ln_gamma_shift(gamma + 1.0, alpha)?;
        let b = (1.0 - alpha) / rho;
        let mut factors = Vec::new();
        let mut tail_var = 0.0;
        if b > 0.0 {
            for n in 0..k {
                let nf = n as f64;
                let beta = Beta::new(1.0 + nf / rho, b)
                    .map_err(|e| param(format!("Beta factor {n}: {e}")))?;
                factors.push((((gamma + nf + 1.0) / (rho + nf)).ln(), beta));
            }
            tail_var = ln_second_moment_tail(alpha, gamma, k);
        }
        Ok(BetaProductSampler { model, ln_prefactor, factors, tail_var })
    }

    pub fn factors(&self) -> usize {
        self.factors.len()
    }

    /// Variance of the log of the lognormal tail factor.
    pub fn tail_log_variance(&self) -> f64 {
        self.tail_var
    }
}

impl ZSampler for BetaProductSampler {
    fn name(&self) -> &'static str {
        "beta"
    }

    fn model(&self) -> &StretchedModel {
        &self.model
    }

    fn sample(&self, rng: &mut RngStream) -> Result<f64> {
        let mut ln_z = self.ln_prefactor;
        for (ln_scale, beta) in &self.factors {
            ln_z += ln_scale + beta.sample(rng).ln();
        }
        if self.tail_var > 0.0 {
            let g: f64 = StandardNormal.sample(rng);
            ln_z += self.tail_var.sqrt() * g - 0.5 * self.tail_var;
        }
        Ok(ln_z.exp())
    }
}

pub type ZSamplerRegistry = Registry<StretchedModel, dyn ZSampler>;

/// Registry with `path` and `beta`.
pub fn z_sampler_registry() -> ZSamplerRegistry {
    let mut r = ZSamplerRegistry::default();
    r.register("path", Box::new(|m: &StretchedModel| Ok(Box::new(PathSampler::new(*m)) as Box<dyn ZSampler>)));
    r.register("beta", Box::new(|m: &StretchedModel| Ok(Box::new(BetaProductSampler::new(*m)?) as Box<dyn ZSampler>)));
    r
}

/// E Z = Γ(γ+1)/Γ(ρ+1).
pub fn z_mean(model: &StretchedModel) -> Result<f64> {
    Ok((-ln_gamma_shift(model.gamma() + 1.0, model.alpha())?).exp())
}
