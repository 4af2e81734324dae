//! The renewal process N_{α,γ} and the time-changed Poisson process N^L.

use rand_distr::{Distribution, Poisson};

use super::interarrival::InterarrivalSampler;
use super::zsampler::ZSampler;
use super::RngStream;
use crate::error::{param, Error, Result};
use crate::relaxation::StretchedModel;

pub const DEFAULT_DRAW_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RenewalTrajectory {
    model: StretchedModel,
    arrivals: Vec<f64>,
    horizon: f64,
}

impl RenewalTrajectory {
    /// Checks that the arrivals are strictly increasing and lie in (0, horizon].
    pub fn new(model: StretchedModel, arrivals: Vec<f64>, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(param(format!("horizon must be positive, got {horizon}")));
        }
        let ordered = arrivals.windows(2).all(|w| w[0] < w[1]);
        let inside = arrivals.first().is_none_or(|&a| a > 0.0) && arrivals.last().is_none_or(|&a| a <= horizon);
        if !(ordered && inside) {
            return Err(param("arrivals must increase strictly within (0, horizon]"));
        }
        Ok(RenewalTrajectory { model, arrivals, horizon })
    }

    pub fn model(&self) -> &StretchedModel {
        &self.model
    }

    /// Arrival times T₁ < T₂ < … up to the horizon.
    pub fn arrivals(&self) -> &[f64] {
        &self.arrivals
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// N(t) = #{n : Tₙ ≤ t} for 0 ≤ t ≤ horizon.
    pub fn count(&self, t: f64) -> Result<usize> {
        if !(t >= 0.0 && t <= self.horizon) {
            return Err(param(format!("t = {t} outside [0, {}]", self.horizon)));
        }
        Ok(self.arrivals.partition_point(|&a| a <= t))
    }
}

/// Cumulative sums of interarrival draws until the horizon is passed.
pub fn simulate_renewal(
    sampler: &dyn InterarrivalSampler,
    horizon: f64,
    max_draws: usize,
    rng: &mut RngStream,
) -> Result<RenewalTrajectory> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(param(format!("horizon must be positive, got {horizon}")));
    }
    let mut arrivals = Vec::new();
    let mut t = 0.0;
    for _ in 0..max_draws {
        let u = sampler.sample(rng)?;
        t += u;
        if t > horizon {
            return Ok(RenewalTrajectory { model: *sampler.model(), arrivals, horizon });
        }
        // zero-length interarrivals merge in floating point
        if arrivals.last().is_some_and(|&last| t <= last) {
            t = arrivals.last().copied().unwrap_or(0.0).next_up();
        }
        arrivals.push(t);
    }
    Err(Error::Budget(format!("renewal path needed more than {max_draws} interarrival draws to reach {horizon}")))
}

/// Poisson(mean): sequential-search inversion below 30, otherwise the
/// rejection sampler of `rand_distr`.
pub fn sample_poisson(mean: f64, rng: &mut RngStream) -> Result<u64> {
    if !(mean >= 0.0 && mean.is_finite()) {
        return Err(param(format!("Poisson mean must be finite and nonnegative, got {mean}")));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    if mean < 30.0 {
        let u = rng.open01();
        let mut p = (-mean).exp();
        let mut cdf = p;
        let mut k = 0u64;
        while u > cdf {
            k += 1;
            p *= mean / k as f64;
            cdf += p;
            if p == 0.0 && cdf < u {
                // u beyond the representable cdf
                break;
            }
        }
        return Ok(k);
    }
    let d = Poisson::new(mean).map_err(|e| param(format!("Poisson({mean}): {e}")))?;
    Ok(d.sample(rng) as u64)
}

/// Independent generators for the two stages of N^L(t) = N(t^ρ Z).
#[derive(Debug, Clone)]
pub struct LaskinStreams {
    pub z: RngStream,
    pub count: RngStream,
}

impl LaskinStreams {
    pub fn new(root: &RngStream) -> Self {
        LaskinStreams { z: root.child(0), count: root.child(1) }
    }
}

/// One draw of N^L(t): Z from its stream, then Poisson(λt^ρZ) from the other.
pub fn simulate_laskin(sampler: &dyn ZSampler, t: f64, streams: &mut LaskinStreams) -> Result<u64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(param(format!("t must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(0);
    }
    let m = sampler.model();
    let z = sampler.sample(&mut streams.z)?;
    sample_poisson(m.lambda() * t.powf(m.rho()) * z, &mut streams.count)
}
