use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use super::laplace::{ContourSpec, KsLaplace};
use crate::error::{param, Error, Result};
use crate::kilbas_saigo::KsFunction;
use crate::relaxation::StretchedModel;

/// Guard for divisions by g(η).
const G_FLOOR: f64 = 1e-14;

/// g(η) = η·∫₀^∞ e^{−ηt} E(−t^{α+γ}) dt = 1 − (Laplace transform of the
/// interarrival density at λ = 1). For λ ≠ 1 the argument is rescaled,
/// g_λ(η) = g(ηλ^{−1/(α+γ)}).
#[derive(Debug, Clone)]
pub struct GEta {
    model: StretchedModel,
    laplace: KsLaplace,
    scale: f64,
}

impl GEta {
    /// Serves real η > 0.
    pub fn new(model: StretchedModel) -> Result<Self> {
        Self::with_max_arg(model, FRAC_PI_2 * 0.5)
    }

    /// Serves complex η with |arg η| ≤ `max_arg`.
    pub fn with_max_arg(model: StretchedModel, max_arg: f64) -> Result<Self> {
        let spec = ContourSpec::new(model.ks_params(), model.rho(), 1.0)?.with_max_arg(max_arg)?;
        let laplace = KsLaplace::new(spec)?;
        let scale = model.lambda().powf(-1.0 / model.rho());
        Ok(GEta { model, laplace, scale })
    }

    pub fn model(&self) -> StretchedModel {
        self.model
    }

    pub fn eval_complex(&self, eta: Complex64) -> Result<Complex64> {
        let z = eta * self.scale;
        Ok(z * self.laplace.eval(z)?)
    }

    pub fn eval(&self, eta: f64) -> Result<f64> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(param(format!("eta must be positive, got {eta}")));
        }
        Ok(self.eval_complex(Complex64::new(eta, 0.0))?.re)
    }

    fn guarded(&self, eta: Complex64) -> Result<Complex64> {
        let g = self.eval_complex(eta)?;
        if g.norm() < G_FLOOR {
            return Err(Error::Domain(format!("g({eta}) = {g} is below {G_FLOOR:e}")));
        }
        Ok(g)
    }

    /// (1 − g)/(η g): Laplace transform of the renewal function E N(t).
    pub fn renewal_lt_complex(&self, eta: Complex64) -> Result<Complex64> {
        let g = self.guarded(eta)?;
        Ok((1.0 - g) / (eta * g))
    }

    pub fn renewal_lt(&self, eta: f64) -> Result<f64> {
        if !(eta > 0.0) {
            return Err(param(format!("eta must be positive, got {eta}")));
        }
        Ok(self.renewal_lt_complex(Complex64::new(eta, 0.0))?.re)
    }

    /// Double Laplace transform of Cov(N(t₁), N(t₂)).
    pub fn covariance_lt(&self, eta1: f64, eta2: f64) -> Result<f64> {
        if !(eta1 > 0.0 && eta2 > 0.0) {
            return Err(param(format!("eta1, eta2 must be positive, got {eta1}, {eta2}")));
        }
        let g1 = self.guarded(Complex64::new(eta1, 0.0))?.re;
        let g2 = self.guarded(Complex64::new(eta2, 0.0))?.re;
        let g12 = self.guarded(Complex64::new(eta1 + eta2, 0.0))?.re;
        Ok((g1 + g2 - g1 * g2 - g12) / (eta1 * eta2 * g1 * g2 * g12))
    }
}

pub fn g_eta(model: &StretchedModel, eta: f64) -> Result<f64> {
    GEta::new(*model)?.eval(eta)
}

pub fn renewal_function_lt(model: &StretchedModel, eta: f64) -> Result<f64> {
    GEta::new(*model)?.renewal_lt(eta)
}

pub fn covariance_lt(model: &StretchedModel, eta1: f64, eta2: f64) -> Result<f64> {
    GEta::new(*model)?.covariance_lt(eta1, eta2)
}

/// Laplace transform in t of the density of A_{α,γ}(t) at x:
/// h̃(x, η) = ρ x^{ρ−1} Σ_l (l+1) c_{l+1} (−η x^ρ)^l = ρ x^{ρ−1} E′(−η x^ρ).
#[derive(Debug)]
pub struct SubordinatorDensity {
    model: StretchedModel,
    f: KsFunction,
}

impl SubordinatorDensity {
    pub fn new(model: StretchedModel) -> Result<Self> {
        Ok(SubordinatorDensity { model, f: KsFunction::new(model.ks_params())? })
    }

    pub fn eval(&self, x: f64, eta: f64) -> Result<f64> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(param(format!("x must be positive, got {x}")));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(param(format!("eta must be positive, got {eta}")));
        }
        let rho = self.model.rho();
        let d = self.f.derivative(1, -eta * x.powf(rho))?;
        Ok(rho * x.powf(rho - 1.0) * d.value)
    }
}

pub fn subordinator_density_lt(model: &StretchedModel, x: f64, eta: f64) -> Result<f64> {
    SubordinatorDensity::new(*model)?.eval(x, eta)
}
