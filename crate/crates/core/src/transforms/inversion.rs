use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{param, Error, Result};

/// Hyperbolic Bromwich contour z(u) = μ(1 + sin(iu − δ)) with the
/// Weideman-Trefethen parameters for a single t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionOptions {
    /// quadrature points in the upper half-plane
    pub nodes: usize,
    /// compare with half the nodes and fail above this relative change
    pub consistency_tol: Option<f64>,
}

impl Default for InversionOptions {
    fn default() -> Self {
        InversionOptions { nodes: 32, consistency_tol: Some(1e-6) }
    }
}

const DELTA: f64 = 1.1721;
const H_SCALE: f64 = 1.0818;
const MU_SCALE: f64 = 4.4921;

/// Largest |arg z| visited by the contour (independent of t and N).
pub fn inversion_max_arg() -> f64 {
    node(1.0, H_SCALE).0.arg().abs()
}

/// z(u) and z′(u) for μ = 1.
fn node(mu: f64, u: f64) -> (Complex64, Complex64) {
    let z = mu * (1.0 + (Complex64::new(-DELTA, u)).sin());
    let dz = mu * Complex64::i() * (Complex64::new(-DELTA, u)).cos();
    (z, dz)
}

fn rule<F: Fn(Complex64) -> Result<Complex64>>(f: &F, t: f64, n: usize) -> Result<f64> {
    let h = H_SCALE / n as f64;
    let mu = MU_SCALE * n as f64 / t;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let (z, dz) = node(mu, k as f64 * h);
        let term = (z * t).exp() * f(z)? * dz;
        acc += if k == 0 { 0.5 * term } else { term };
    }
    Ok(acc.im * h / PI)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inverted {
    pub value: f64,
    /// |f_N − f_{N/2}|
    pub consistency: f64,
}

/// f(t) from F(z) = ∫₀^∞ e^{−zt} f(t) dt. F must be analytic left of the
/// contour's asymptotes (|arg z| ≤ [`inversion_max_arg`] on the nodes) and
/// real on the real axis.
pub fn invert_laplace_with<F: Fn(Complex64) -> Result<Complex64>>(
    f: F,
    t: f64,
    opts: &InversionOptions,
) -> Result<Inverted> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(param(format!("t must be positive, got {t}")));
    }
    if opts.nodes < 4 {
        return Err(param("at least 4 contour nodes are required"));
    }
    let value = rule(&f, t, opts.nodes)?;
    let half = rule(&f, t, opts.nodes / 2)?;
    let consistency = (value - half).abs();
    if let Some(tol) = opts.consistency_tol {
        if consistency > tol * value.abs().max(1e-300) {
            return Err(Error::NonConvergence {
                what: "Laplace inversion",
                detail: format!(
                    "{} and {} nodes differ by {consistency:e} at t = {t}",
                    opts.nodes,
                    opts.nodes / 2
                ),
            });
        }
    }
    Ok(Inverted { value, consistency })
}

pub fn invert_laplace<F: Fn(Complex64) -> Result<Complex64>>(f: F, t: f64) -> Result<f64> {
    invert_laplace_with(f, t, &InversionOptions::default()).map(|r| r.value)
}
