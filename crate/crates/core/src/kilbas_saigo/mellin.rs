use num_complex::Complex64;
use std::f64::consts::PI;

use super::KsParams;
use crate::error::Result;
use crate::specfun::{ln_gamma, ln_sin_pi, DoubleGamma};

/// Largest argument the node set is tuned for; beyond it the discretisation
/// error bound grows like x^d.
const X_MAX: f64 = 1e14;

/// ln G(w;τ) − ln G(w+aτ;τ), using G(w+k) = G(w)∏_{j<k}Γ((w+j)/τ) when aτ is
/// an integer k (the Mittag-Leffler family has aτ = 1).
pub(crate) enum GRatio {
    Integer { k: usize, tau: f64 },
    General { g: DoubleGamma, shift: f64 },
}

impl GRatio {
    pub(crate) fn new(p: &KsParams) -> Result<Self> {
        let tau = p.tau();
        let shift = p.a() * tau;
        let k = shift.round();
        if (shift - k).abs() < 1e-13 * shift.max(1.0) && k >= 1.0 {
            Ok(GRatio::Integer { k: k as usize, tau })
        } else {
            Ok(GRatio::General { g: DoubleGamma::new(tau)?, shift })
        }
    }

    /// ln G(w) − ln G(w + aτ); `None` when G(w) = 0.
    pub(crate) fn ln_ratio(&self, w: Complex64) -> Result<Option<Complex64>> {
        match self {
            GRatio::Integer { k, tau } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..*k {
                    // a pole of Γ here is a zero of G(w + aτ): the ratio has a pole
                    acc -= ln_gamma((w + j as f64) / tau)?;
                }
                Ok(Some(acc))
            }
            GRatio::General { g, shift } => {
                let num = match g.ln_g(w) {
                    Ok(v) => v,
                    Err(crate::Error::Domain(m)) if m.contains("zero of G") => return Ok(None),
                    Err(e) => return Err(e),
                };
                Ok(Some(num - g.ln_g(w + *shift)?))
            }
        }
    }
}

/// E_{a,m,l}(−x), x > 0, from
/// E(−x) = K/(2πi) ∫_{c−i∞}^{c+i∞} Γ(s)Γ(1−s) G(φ−s)/G(φ+aτ−s) x^{−s} ds,
/// K = G(φ+aτ)/G(φ), discretised by the trapezoidal rule on Re s = c.
/// The x-independent part of the integrand is tabulated once.
#[derive(Debug, Clone)]
pub struct MellinSurvival {
    c: f64,
    h: f64,
    // Φ(c + i j h) for j = 0, 1, …
    phi: Vec<Complex64>,
}

impl std::fmt::Debug for GRatio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GRatio::Integer { k, .. } => write!(f, "GRatio::Integer({k})"),
            GRatio::General { shift, .. } => write!(f, "GRatio::General({shift})"),
        }
    }
}

impl MellinSurvival {
    pub fn new(p: KsParams) -> Result<Self> {
        let ratio = GRatio::new(&p)?;
        let phi0 = p.phi();
        let shift = p.a() * p.tau();
        let upper = (phi0 + shift).min(1.0);
        let c = 0.5 * upper;
        let d = 0.8 * c;
        // two-level trapezoid stays converged to ~1e-11 at x = X_MAX
        let h = PI * d / (25.5 + d * X_MAX.ln());
        let decay = (1.0 - 0.5 * p.a()) * PI;
        let y_max = 40.0 / decay + 6.0;
        let n = (y_max / h).ceil() as usize;
        let ln_k = match &ratio {
            GRatio::Integer { k, tau } => {
                let mut acc = 0.0;
                for j in 0..*k {
                    acc += ln_gamma(Complex64::new((phi0 + j as f64) / tau, 0.0))?.re;
                }
                acc
            }
            GRatio::General { .. } => -ratio
                .ln_ratio(Complex64::new(phi0, 0.0))?
                .map(|v| v.re)
                .unwrap_or(f64::NEG_INFINITY),
        };
        let mut phi = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let s = Complex64::new(c, j as f64 * h);
            // Γ(s)Γ(1−s) = π / sin(πs)
            let lg = Complex64::new(PI.ln() + ln_k, 0.0) - ln_sin_pi(s);
            let v = match ratio.ln_ratio(phi0 - s)? {
                Some(r) => (lg + r).exp(),
                None => Complex64::new(0.0, 0.0),
            };
            phi.push(v);
        }
        Ok(MellinSurvival { c, h, phi })
    }

    pub fn nodes(&self) -> usize {
        self.phi.len()
    }

    fn sum(&self, x: f64, stride: usize) -> f64 {
        let lx = x.ln();
        let step = Complex64::from_polar(1.0, -(stride as f64) * self.h * lx);
        let mut rot = Complex64::new(1.0, 0.0);
        let mut acc = 0.5 * self.phi[0].re;
        for (i, j) in (stride..self.phi.len()).step_by(stride).enumerate() {
            if i % 64 == 63 {
                rot = Complex64::from_polar(1.0, -(j as f64) * self.h * lx);
            } else {
                rot *= step;
            }
            acc += (self.phi[j] * rot).re;
        }
        acc * (stride as f64) * self.h / PI * (-self.c * lx).exp()
    }

    /// E(−x) with an error estimate from the half-resolution rule.
    pub fn eval_with_error(&self, x: f64) -> (f64, f64) {
        let fine = self.sum(x, 1);
        let coarse = self.sum(x, 2);
        let tail = self.phi.last().map(|v| v.norm()).unwrap_or(0.0) * (-self.c * x.ln()).exp();
        (fine, (fine - coarse).abs() + tail + 1e-15)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.sum(x, 1)
    }

    /// Σ' Φ_j (s_j)_n x^{−s_j} over every `stride`-th node.
    fn sum_poch(&self, x: f64, n: usize, stride: usize) -> f64 {
        let lx = x.ln();
        let mut acc = 0.0;
        for j in (0..self.phi.len()).step_by(stride) {
            let s = Complex64::new(self.c, j as f64 * self.h);
            let mut poch = Complex64::new(1.0, 0.0);
            for i in 0..n {
                poch *= s + i as f64;
            }
            let rot = Complex64::from_polar(1.0, -(j as f64) * self.h * lx);
            let v = (self.phi[j] * poch * rot).re;
            acc += if j == 0 { 0.5 * v } else { v };
        }
        acc * (stride as f64) * self.h / PI * (-(self.c + n as f64) * lx).exp()
    }

    /// n-th derivative E^{(n)}(−x) from (d/dz)^n z^{−s}|_{z=−x} applied under
    /// the integral: K/(2πi)∫ Φ(s)(s)_n x^{−s−n} ds. Returns value and error
    /// estimate; the estimate includes the polynomially amplified cut-off.
    pub fn derivative_with_error(&self, n: usize, x: f64) -> (f64, f64) {
        if n == 0 {
            return self.eval_with_error(x);
        }
        let fine = self.sum_poch(x, n, 1);
        let coarse = self.sum_poch(x, n, 2);
        let last = self.phi.len() - 1;
        let s = Complex64::new(self.c, last as f64 * self.h);
        let mut poch = 1.0;
        for i in 0..n {
            poch *= (s + i as f64).norm();
        }
        let tail = self.phi[last].norm() * poch * (-(self.c + n as f64) * x.ln()).exp();
        (fine, (fine - coarse).abs() + tail + 1e-15 * fine.abs())
    }
}

/// Mellin transform ∫₀^∞ E_{a,m,l}(−x) x^{s−1} dx
/// = K Γ(s)Γ(1−s) G(φ−s)/G(φ+aτ−s) for 0 < s < min(1, φ + aτ).
pub fn ks_mellin(p: KsParams, s: f64) -> Result<f64> {
    let upper = (p.phi() + p.a() * p.tau()).min(1.0);
    if !(s > 0.0 && s < upper) {
        return Err(crate::Error::Domain(format!("Mellin transform needs 0 < s < {upper}, got {s}")));
    }
    let ratio = GRatio::new(&p)?;
    let phi0 = Complex64::new(p.phi(), 0.0);
    let at = |w: Complex64| -> Result<f64> {
        ratio
            .ln_ratio(w)?
            .map(|v| v.re)
            .ok_or_else(|| crate::Error::Domain("zero of G in the Mellin transform".into()))
    };
    Ok((PI.ln() - (PI * s).sin().ln() + at(phi0 - s)? - at(phi0)?).exp())
}
