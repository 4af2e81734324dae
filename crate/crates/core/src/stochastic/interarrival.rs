//! Interarrival times U with P(U > t) = E(−λt^ρ).

use super::registry::Registry;
use super::zsampler::{BetaProductSampler, ZSampler};
use super::RngStream;
use crate::error::{Error, Result};
use crate::kilbas_saigo::{ks_asymptotic, ks_mellin, KsFunction};
use crate::relaxation::StretchedModel;
use crate::specfun::gamma;

pub trait InterarrivalSampler: Send + Sync {
    fn name(&self) -> &'static str;
    fn model(&self) -> &StretchedModel;
    fn sample(&self, rng: &mut RngStream) -> Result<f64>;
}

/// U = (V/Z)^{1/ρ} with V ~ Exp(λ) independent of Z.
pub struct FastInterarrival {
    model: StretchedModel,
    z: Box<dyn ZSampler>,
}

impl FastInterarrival {
    pub fn new(model: StretchedModel) -> Result<Self> {
        Ok(FastInterarrival { model, z: Box::new(BetaProductSampler::new(model)?) })
    }

    pub fn with_z_sampler(z: Box<dyn ZSampler>) -> Self {
        FastInterarrival { model: *z.model(), z }
    }
}

impl InterarrivalSampler for FastInterarrival {
    fn name(&self) -> &'static str {
        "fast"
    }

    fn model(&self) -> &StretchedModel {
        &self.model
    }

    fn sample(&self, rng: &mut RngStream) -> Result<f64> {
        let v = -rng.open01().ln() / self.model.lambda();
        let z = self.z.sample(rng)?;
        Ok((v / z).powf(1.0 / self.model.rho()))
    }
}

/// Inverts the survival function: draws W ~ U(0,1) and solves E(−x) = W by
/// bracketing and geometric bisection, then t = (x/λ)^{1/ρ}.
#[derive(Debug)]
pub struct InverseCdfInterarrival {
    model: StretchedModel,
    f: KsFunction,
    rel_tol: f64,
}

impl InverseCdfInterarrival {
    pub fn new(model: StretchedModel) -> Result<Self> {
        Ok(InverseCdfInterarrival { model, f: KsFunction::with_tolerance(model.ks_params(), 1e-12)?, rel_tol: 1e-10 })
    }

    /// x with E(−x) = w, for w ∈ (0, 1).
    pub fn survival_quantile(&self, w: f64) -> Result<f64> {
        let s = |x: f64| self.f.survival(x);
        let c = ks_asymptotic(self.model.ks_params(), 1.0)?;
        let mut hi = if c > 0.0 { 2.0 * c / w } else { 1.0 };
        let mut tries = 0;
        while s(hi)? >= w {
            hi *= 4.0;
            tries += 1;
            if tries > 200 || !hi.is_finite() {
                return Err(bracket_failure(w));
            }
        }
        let mut lo = hi;
        tries = 0;
        while s(lo)? < w {
            lo *= 0.25;
            tries += 1;
            if tries > 400 || lo == 0.0 {
                return Err(bracket_failure(w));
            }
        }
        while hi / lo - 1.0 > self.rel_tol {
            let mid = (lo * hi).sqrt();
            if s(mid)? >= w {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo * hi).sqrt())
    }
}

fn bracket_failure(w: f64) -> Error {
    Error::NonConvergence { what: "inverse-CDF bracket", detail: format!("no bracket for survival level {w:e}") }
}

impl InterarrivalSampler for InverseCdfInterarrival {
    fn name(&self) -> &'static str {
        "inverse-cdf"
    }

    fn model(&self) -> &StretchedModel {
        &self.model
    }

    fn sample(&self, rng: &mut RngStream) -> Result<f64> {
        let x = self.survival_quantile(rng.open01())?;
        Ok((x / self.model.lambda()).powf(1.0 / self.model.rho()))
    }
}

pub type InterarrivalRegistry = Registry<StretchedModel, dyn InterarrivalSampler>;

/// Registry with `fast` and `inverse-cdf`.
pub fn interarrival_registry() -> InterarrivalRegistry {
    let mut r = InterarrivalRegistry::default();
    r.register(
        "fast",
        Box::new(|m: &StretchedModel| Ok(Box::new(FastInterarrival::new(*m)?) as Box<dyn InterarrivalSampler>)),
    );
    r.register(
        "inverse-cdf",
        Box::new(|m: &StretchedModel| Ok(Box::new(InverseCdfInterarrival::new(*m)?) as Box<dyn InterarrivalSampler>)),
    );
    r
}

/// E U = λ^{−1/ρ} M(1/ρ)/ρ for ρ > 1, where M is the Mellin transform of
/// x ↦ E(−x); infinite for ρ ≤ 1 (α < 1). At α = 1 the survival function is
/// exp(−λt^ρ/ρ) and every moment is finite.
pub fn interarrival_mean(model: &StretchedModel) -> Result<f64> {
    let rho = model.rho();
    let alpha = model.alpha();
    if alpha == 1.0 {
        return Ok(gamma(1.0 + 1.0 / rho)? * (rho / model.lambda()).powf(1.0 / rho));
    }
    if rho <= 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(ks_mellin(model.ks_params(), 1.0 / rho)? / (rho * model.lambda().powf(1.0 / rho)))
}
