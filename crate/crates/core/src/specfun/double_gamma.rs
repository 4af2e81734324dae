use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::ln_gamma;
use crate::error::{param, Error, Result};
use crate::quadrature::{integrate, GkOptions};

/// |z| above which the Stirling expansion replaces the integral representation.
pub const STIRLING_THRESHOLD: f64 = 20.0;

/// Truncation order of the power series used next to u = 0.
const SERIES_ORDER: usize = 30;

fn series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().min(b.len());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        if a[i] == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

/// Coefficients of e^{c u}.
fn series_exp(c: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 0..n {
        out.push(term);
        term = term * c / (k + 1) as f64;
    }
    out
}

/// Coefficients of x / (1 - e^{-x}).
fn bernoulli_generating(n: usize) -> Vec<f64> {
    // reciprocal of (1 - e^{-x})/x = sum (-1)^k x^k / (k+1)!
    let mut d = Vec::with_capacity(n);
    let mut fact = 1.0;
    for k in 0..n {
        fact *= (k + 1) as f64;
        d.push(if k % 2 == 0 { 1.0 } else { -1.0 } / fact);
    }
    let mut r = vec![0.0; n];
    r[0] = 1.0;
    for k in 1..n {
        let mut s = 0.0;
        for j in 1..=k {
            s += d[j] * r[k - j];
        }
        r[k] = -s;
    }
    r
}

fn scaled(c: &[f64], s: f64) -> Vec<Complex64> {
    let mut p = 1.0;
    c.iter()
        .map(|&x| {
            let v = Complex64::new(x * p, 0.0);
            p *= s;
            v
        })
        .collect()
}

/// Integrand of the representation ln G(z;τ) = ∫_0^∞ h(u) du (with r = e^{-u}).
fn integrand(u: f64, z: Complex64, tau: f64) -> Complex64 {
    let em1 = (-u).exp_m1(); // r - 1
    let emt1 = (-tau * u).exp_m1(); // r^τ - 1
    let r = (-u).exp();
    let rt1 = ((1.0 - tau) * u).exp(); // r^{τ-1}
    let rz1 = (-(z - 1.0) * u).exp(); // r^{z-1}
    let rt = emt1 + 1.0;
    let b = (rz1 - rt1) / (em1 * emt1) - z * z / (2.0 * tau) * rt1
        - z * rt1 * ((2.0 - rt) / emt1 - 1.0 / (2.0 * tau))
        - rt1
        + 1.0 / em1;
    -b * r / u
}

/// Integral of the integrand over [0, us] from its Taylor expansion.
fn series_part(z: Complex64, tau: f64, us: f64) -> Complex64 {
    let n = SERIES_ORDER + 4;
    let beta = bernoulli_generating(n);
    let b1 = scaled(&beta, 1.0);
    let bt = scaled(&beta, tau);
    let one = Complex64::new(1.0, 0.0);
    let e_z = series_exp(-(z - 1.0), n);
    let e_t = series_exp(Complex64::new(1.0 - tau, 0.0), n);
    let e_tau = series_exp(Complex64::new(-tau, 0.0), n);
    let bb = series_mul(&b1, &bt);
    let diff: Vec<Complex64> = e_z.iter().zip(&e_t).map(|(a, b)| a - b).collect();
    let mut p = series_mul(&diff, &bb);
    // z u e^{-(τ-1)u} (2 - e^{-τu}) β(τu)
    let two_minus: Vec<Complex64> =
        e_tau.iter().enumerate().map(|(k, &c)| if k == 0 { 2.0 * one - c } else { -c }).collect();
    let t3 = series_mul(&series_mul(&e_t, &two_minus), &bt);
    for k in 0..n - 1 {
        p[k + 1] += z * t3[k];
    }
    // (-z²/2 + z/2 - τ) u² e^{-(τ-1)u}
    let c2 = -z * z / 2.0 + z / 2.0 - tau;
    for k in 0..n - 2 {
        p[k + 2] += c2 * e_t[k];
    }
    // -τ u β(u)
    for k in 0..n - 1 {
        p[k + 1] -= tau * b1[k];
    }
    // h(u) = -e^{-u} P(u) / (τ u³)
    let q: Vec<Complex64> = p[3..].iter().map(|c| -c / tau).collect();
    let e_u = series_exp(Complex64::new(-1.0, 0.0), q.len());
    let h = series_mul(&q, &e_u);
    let mut total = Complex64::new(0.0, 0.0);
    let mut pw = us;
    for (k, c) in h.iter().enumerate().take(SERIES_ORDER) {
        total += c * pw / (k + 1) as f64;
        pw *= us;
    }
    total
}

/// ln G(z;τ) from the integral representation; requires Re z > 0.
pub fn ln_double_gamma_integral(z: Complex64, tau: f64) -> Result<Complex64> {
    check_tau(tau)?;
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!("integral representation needs Re z > 0, got {z}")));
    }
    let us = 0.5f64.min(1.0 / (tau + 1.0)).min(2.0 / (z.norm() + 1.0));
    let head = series_part(z, tau, us);
    let mu = tau.min(z.re).min(1.0);
    let upper = (42.0 + (1.0 + z.norm_sqr() / tau).ln()) / mu;
    let mut bps = vec![us];
    let mut x = us;
    while x * 4.0 < upper {
        x *= 4.0;
        bps.push(x);
    }
    bps.push(upper);
    let opts = GkOptions { abs_tol: 1e-14, rel_tol: 1e-13, max_intervals: 4000 };
    let (tail, _) = integrate(|u| Ok(integrand(u, z, tau)), &bps, opts)?;
    Ok(head + tail)
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::Domain(format!("tau must be positive and finite, got {tau}")));
    }
    Ok(())
}

/// Shift Re z to at least 1 with G(z) = G(z+k) / ∏_{j<k} Γ((z+j)/τ).
/// Returns (z+k, -Σ ln Γ((z+j)/τ)); a gamma pole means z is a zero of G.
fn shift_up(z: Complex64, tau: f64) -> Result<(Complex64, Complex64)> {
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while w.re < 1.0 {
        match ln_gamma(w / tau) {
            Ok(lg) => acc -= lg,
            Err(Error::Pole(_)) => {
                return Err(Error::Domain(format!("z = {z} is a zero of G(z; {tau})")))
            }
            Err(e) => return Err(e),
        }
        w += 1.0;
    }
    Ok((w, acc))
}

fn ln_integral_shifted(z: Complex64, tau: f64) -> Result<Complex64> {
    let (w, acc) = shift_up(z, tau)?;
    Ok(ln_double_gamma_integral(w, tau)? + acc)
}

/// Evaluator for G(·;τ) at fixed τ. The Stirling constant b₀ is computed once.
#[derive(Debug, Clone)]
pub struct DoubleGamma {
    tau: f64,
    b0: f64,
    threshold: f64,
    d: Vec<f64>,
}

impl DoubleGamma {
    pub fn new(tau: f64) -> Result<Self> {
        Self::with_threshold(tau, STIRLING_THRESHOLD)
    }

    pub fn with_threshold(tau: f64, threshold: f64) -> Result<Self> {
        check_tau(tau)?;
        if !(threshold >= 4.0) {
            return Err(param(format!("Stirling threshold must be at least 4, got {threshold}")));
        }
        let a0 = tau / 12.0 + 0.25 + 1.0 / (12.0 * tau);
        let lg_half = ln_integral_shifted(Complex64::new(0.5, 0.0), tau)?.re;
        let lg_tau = ln_integral_shifted(Complex64::new(tau, 0.0), 2.0 * tau)?.re;
        let b0 = (2.0 * lg_half + lg_tau - 0.5 * (1.0 + tau) * (2.0 * PI).ln()
            - a0 * (tau.powi(3) / 2.0).ln()
            - 2f64.ln())
            / 3.0;
        let n = 60;
        let beta = bernoulli_generating(n);
        let bb = series_mul(&scaled(&beta, 1.0), &scaled(&beta, tau));
        let d = bb.iter().map(|c| c.re).collect();
        Ok(DoubleGamma { tau, b0, threshold, d })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Stirling expansion of ln G(z;τ), including the inverse-power terms
    /// generated by the same integral; requires Re z > 0.
    pub fn ln_g_stirling(&self, z: Complex64) -> Result<Complex64> {
        if !(z.re > 0.0) {
            return Err(Error::Domain(format!("Stirling route needs Re z > 0, got {z}")));
        }
        let tau = self.tau;
        let lt = tau.ln();
        let a0 = tau / 12.0 + 0.25 + 1.0 / (12.0 * tau);
        let a1 = -0.5 * (1.0 + 1.0 / tau);
        let a2 = 0.5 / tau;
        let b2 = -(1.5 + lt) / (2.0 * tau);
        let b1 = 0.5 * ((1.0 + 1.0 / tau) * (1.0 + lt) + (2.0 * PI).ln());
        let mut s = (a2 * z * z + a1 * z + a0) * z.ln() + b2 * z * z + b1 * z + self.b0;
        let zi = 1.0 / z;
        let mut zp = zi;
        let mut fact = 1.0;
        let mut last = f64::INFINITY;
        for k in 3..self.d.len() {
            if k > 3 {
                fact *= (k - 3) as f64;
            }
            let term = -(self.d[k] / tau) * fact * zp;
            let m = term.norm();
            if m > last {
                break;
            }
            s += term;
            if m < 1e-17 * s.norm().max(1.0) {
                break;
            }
            last = m.max(1e-300);
            zp *= zi;
        }
        Ok(s)
    }

    /// ln G(z;τ) by the integral representation; requires Re z > 0.
    pub fn ln_g_integral(&self, z: Complex64) -> Result<Complex64> {
        ln_double_gamma_integral(z, self.tau)
    }

    /// ln G(z;τ) for any z that is not a zero of G. The imaginary part is a
    /// branch of the argument, not necessarily the principal one.
    pub fn ln_g(&self, z: Complex64) -> Result<Complex64> {
        let (w, acc) = shift_up(z, self.tau)?;
        let core = if w.norm() >= self.threshold {
            self.ln_g_stirling(w)?
        } else {
            ln_double_gamma_integral(w, self.tau)?
        };
        Ok(core + acc)
    }

    /// G(z;τ); exactly zero at the zeros z = −mτ − n.
    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        match self.ln_g(z) {
            Ok(l) => Ok(l.exp()),
            Err(Error::Domain(msg)) if msg.contains("zero of G") => Ok(Complex64::new(0.0, 0.0)),
            Err(e) => Err(e),
        }
    }
}

/// G(z;τ) for a single argument. Builds a fresh evaluator; reuse
/// [`DoubleGamma`] when evaluating many points at the same τ.
pub fn double_gamma(z: Complex64, tau: f64) -> Result<Complex64> {
    DoubleGamma::new(tau)?.value(z)
}

pub fn ln_double_gamma(z: Complex64, tau: f64) -> Result<Complex64> {
    DoubleGamma::new(tau)?.ln_g(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn bernoulli_coefficients() {
        let b = bernoulli_generating(6);
        let want = [1.0, 0.5, 1.0 / 12.0, 0.0, -1.0 / 720.0, 0.0];
        for (x, y) in b.iter().zip(want) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn series_matches_direct_integrand() {
        // derivative of the head integral at the split point equals the integrand there
        let z = Complex64::new(1.7, 0.4);
        let tau = 0.8;
        let us = 0.3;
        let h = 1e-4;
        let d = (series_part(z, tau, us + h) - series_part(z, tau, us - h)) / (2.0 * h);
        let direct = integrand(us, z, tau);
        assert!((d - direct).norm() < 1e-7 * direct.norm().max(1.0));
    }

    #[test]
    fn unit_value() {
        for tau in [0.5, 0.7, 1.0, 2.0] {
            let g = DoubleGamma::new(tau).unwrap();
            assert!(g.ln_g(c(1.0)).unwrap().norm() < 1e-12, "tau {tau}");
        }
    }

    #[test]
    fn barnes_g_at_tau_one() {
        let g = DoubleGamma::new(1.0).unwrap();
        assert!((g.value(c(4.0)).unwrap().re - 2.0).abs() < 1e-10);
        assert!((g.value(c(5.0)).unwrap().re - 12.0).abs() < 1e-9);
    }

    #[test]
    fn zeros_are_exact() {
        let g = DoubleGamma::new(0.5).unwrap();
        assert_eq!(g.value(c(-1.5)).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(g.value(c(0.0)).unwrap(), Complex64::new(0.0, 0.0));
        assert!(g.value(c(-1.25)).unwrap().norm() > 0.0);
    }
}
