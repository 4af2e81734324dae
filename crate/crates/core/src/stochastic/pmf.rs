//! Counting distributions of N^L (Laskin), N̄^L (second order) and N̂^L (hat).

use super::registry::Registry;
use crate::error::{param, Error, Result};
use crate::kilbas_saigo::KsFunction;
use crate::relaxation::StretchedModel;
use crate::specfun::ln_gamma_shift;

/// Entries below this are treated as rounding noise and clamped to zero.
pub const NEGATIVE_CLAMP: f64 = -1e-12;
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;
/// Absolute accuracies tried in turn for each p(n;t).
pub const PROB_TOLERANCES: [f64; 3] = [1e-13, 1e-11, 1e-10];

#[derive(Debug, Clone, PartialEq)]
pub struct PmfTable {
    pub model: StretchedModel,
    pub t: f64,
    pub probs: Vec<f64>,
    /// 1 − Σ probs, clamped at 0.
    pub truncation_mass: f64,
}

impl PmfTable {
    fn from_probs(model: StretchedModel, t: f64, mut probs: Vec<f64>) -> Result<Self> {
        for (n, p) in probs.iter_mut().enumerate() {
            if *p < NEGATIVE_CLAMP {
                return Err(Error::ToleranceNotAchievable {
                    tol: -NEGATIVE_CLAMP,
                    detail: format!("p({n}) = {p:e} is negative beyond rounding"),
                });
            }
            *p = p.max(0.0);
        }
        let total: f64 = probs.iter().sum();
        if total > 1.0 + NORMALIZATION_TOLERANCE {
            return Err(Error::ToleranceNotAchievable {
                tol: NORMALIZATION_TOLERANCE,
                detail: format!("probabilities sum to 1 + {:e}", total - 1.0),
            });
        }
        Ok(PmfTable { model, t, probs, truncation_mass: (1.0 - total).max(0.0) })
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(param(format!("t must be nonnegative, got {t}")));
    }
    Ok(())
}

/// Evaluator of the Laskin pmf p(n;t) = x^n/n!·E^{(n)}(−x), x = λt^ρ.
#[derive(Debug)]
pub struct LaskinPmf {
    model: StretchedModel,
    f: KsFunction,
}

impl LaskinPmf {
    pub fn new(model: StretchedModel) -> Result<Self> {
        if !model.cm_regime() {
            return Err(Error::Regime(format!(
                "the Laskin pmf needs alpha + gamma <= 1, got {}",
                model.rho()
            )));
        }
        Ok(LaskinPmf { model, f: KsFunction::with_tolerance(model.ks_params(), 1e-13)? })
    }

    pub fn model(&self) -> &StretchedModel {
        &self.model
    }

    pub fn prob(&self, n: usize, t: f64) -> Result<f64> {
        check_t(t)?;
        if t == 0.0 {
            return Ok(if n == 0 { 1.0 } else { 0.0 });
        }
        let x = self.model.lambda() * t.powf(self.model.rho());
        let ln_w = n as f64 * x.ln() - ln_factorial(n);
        let mut last = None;
        for tol in PROB_TOLERANCES {
            match self.f.derivative_with_tolerance(n, -x, tol * (-ln_w).exp()) {
                Ok(d) => return Ok(ln_w.exp() * d.value),
                Err(e @ Error::ToleranceNotAchievable { .. }) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last.expect("nonempty tolerance ladder"))
    }

    pub fn table(&self, t: f64, n_max: usize) -> Result<PmfTable> {
        let probs = (0..=n_max).map(|n| self.prob(n, t)).collect::<Result<Vec<_>>>()?;
        PmfTable::from_probs(self.model, t, probs)
    }

    /// E(−λt^ρ), the probability of no arrival by t.
    pub fn survival(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        self.f.survival(self.model.lambda() * t.powf(self.model.rho()))
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub fn pmf_laskin(model: &StretchedModel, t: f64, n_max: usize) -> Result<PmfTable> {
    LaskinPmf::new(*model)?.table(t, n_max)
}

/// p̄(n;t) = p(2n;t) + p(2n+1;t).
pub fn pmf_second_order(model: &StretchedModel, t: f64, n_max: usize) -> Result<PmfTable> {
    let base = pmf_laskin(model, t, 2 * n_max + 1)?;
    let probs = base.probs.chunks(2).map(|c| c[0] + c[1]).collect();
    PmfTable::from_probs(*model, t, probs)
}

/// G(0,t) = E(−x) − Σⱼ cⱼ j (−x)ʲ = E(−x) + x E′(−x), x = λt^ρ.
pub fn survival_second_order(model: &StretchedModel, t: f64) -> Result<f64> {
    check_t(t)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    let f = KsFunction::with_tolerance(model.ks_params(), 1e-13)?;
    let x = model.lambda() * t.powf(model.rho());
    Ok(f.eval(-x)?.value + x * f.derivative(1, -x)?.value)
}

/// E N̄^L(t) = (x/2)Γ(γ+1)/Γ(ρ+1) + (E(−2x) − 1)/4.
pub fn mean_second_order(model: &StretchedModel, t: f64) -> Result<f64> {
    check_t(t)?;
    let x = model.lambda() * t.powf(model.rho());
    let f = KsFunction::with_tolerance(model.ks_params(), 1e-13)?;
    let ratio = (-ln_gamma_shift(model.gamma() + 1.0, model.alpha())?).exp();
    Ok(0.5 * x * ratio + 0.25 * (f.eval(-2.0 * x)?.value - 1.0))
}

/// Mixture weight and rates of the hat process: η₁ < η₂ roots of
/// η² − aη + b, K = (η₂ − λ)/(η₂ − η₁).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HatMixture {
    pub eta1: f64,
    pub eta2: f64,
    pub k: f64,
}

impl HatMixture {
    pub fn new(a: f64, b: f64, lambda: f64) -> Result<Self> {
        if !(b > 0.0 && a > 0.0 && b < a * a / 4.0) {
            return Err(Error::Regime(format!("the hat process needs 0 < b < a^2/4, got a = {a}, b = {b}")));
        }
        let omega = (a * a / 4.0 - b).sqrt();
        let eta2 = a / 2.0 + omega;
        let eta1 = b / eta2;
        if !(lambda >= eta1 && lambda <= eta2) {
            return Err(Error::Regime(format!("lambda = {lambda} outside [{eta1}, {eta2}]")));
        }
        Ok(HatMixture { eta1, eta2, k: (eta2 - lambda) / (eta2 - eta1) })
    }
}

/// K·p(n;t | λ=η₁) + (1−K)·p(n;t | λ=η₂); λ is taken from the model.
pub fn pmf_hat(model: &StretchedModel, a: f64, b: f64, t: f64, n_max: usize) -> Result<PmfTable> {
    let mix = HatMixture::new(a, b, model.lambda())?;
    let p1 = pmf_laskin(&model.with_lambda(mix.eta1)?, t, n_max)?;
    let p2 = pmf_laskin(&model.with_lambda(mix.eta2)?, t, n_max)?;
    let probs = p1.probs.iter().zip(&p2.probs).map(|(x, y)| mix.k * x + (1.0 - mix.k) * y).collect();
    PmfTable::from_probs(*model, t, probs)
}

pub fn survival_hat(model: &StretchedModel, a: f64, b: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    let mix = HatMixture::new(a, b, model.lambda())?;
    let f = KsFunction::with_tolerance(model.ks_params(), 1e-13)?;
    let tr = t.powf(model.rho());
    Ok(mix.k * f.survival(mix.eta1 * tr)? + (1.0 - mix.k) * f.survival(mix.eta2 * tr)?)
}

/// What a pmf strategy is built from. `a`, `b` are only read by `hat`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmfConfig {
    pub model: StretchedModel,
    pub a: Option<f64>,
    pub b: Option<f64>,
}

pub trait PmfKind: Send + Sync {
    fn name(&self) -> &'static str;
    fn table(&self, t: f64, n_max: usize) -> Result<PmfTable>;
    /// Probability of no count by t.
    fn survival(&self, t: f64) -> Result<f64>;
}

struct LaskinKind(LaskinPmf);
struct SecondOrderKind(StretchedModel);
struct HatKind {
    model: StretchedModel,
    a: f64,
    b: f64,
}

impl PmfKind for LaskinKind {
    fn name(&self) -> &'static str {
        "laskin"
    }
    fn table(&self, t: f64, n_max: usize) -> Result<PmfTable> {
        self.0.table(t, n_max)
    }
    fn survival(&self, t: f64) -> Result<f64> {
        self.0.survival(t)
    }
}

impl PmfKind for SecondOrderKind {
    fn name(&self) -> &'static str {
        "second-order"
    }
    fn table(&self, t: f64, n_max: usize) -> Result<PmfTable> {
        pmf_second_order(&self.0, t, n_max)
    }
    fn survival(&self, t: f64) -> Result<f64> {
        survival_second_order(&self.0, t)
    }
}

impl PmfKind for HatKind {
    fn name(&self) -> &'static str {
        "hat"
    }
    fn table(&self, t: f64, n_max: usize) -> Result<PmfTable> {
        pmf_hat(&self.model, self.a, self.b, t, n_max)
    }
    fn survival(&self, t: f64) -> Result<f64> {
        survival_hat(&self.model, self.a, self.b, t)
    }
}

pub type PmfRegistry = Registry<PmfConfig, dyn PmfKind>;

/// Registry with `laskin`, `second-order` and `hat`.
pub fn pmf_registry() -> PmfRegistry {
    let mut r = PmfRegistry::default();
    r.register("laskin", Box::new(|c: &PmfConfig| Ok(Box::new(LaskinKind(LaskinPmf::new(c.model)?)) as Box<dyn PmfKind>)));
    r.register(
        "second-order",
        Box::new(|c: &PmfConfig| {
            if !c.model.cm_regime() {
                return Err(Error::Regime(format!("the second-order pmf needs alpha + gamma <= 1, got {}", c.model.rho())));
            }
            Ok(Box::new(SecondOrderKind(c.model)) as Box<dyn PmfKind>)
        }),
    );
    r.register(
        "hat",
        Box::new(|c: &PmfConfig| {
            let (Some(a), Some(b)) = (c.a, c.b) else {
                return Err(param("the hat pmf needs both a and b"));
            };
            HatMixture::new(a, b, c.model.lambda())?;
            Ok(Box::new(HatKind { model: c.model, a, b }) as Box<dyn PmfKind>)
        }),
    );
    r
}
