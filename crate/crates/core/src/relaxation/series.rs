use num_complex::Complex64;

use super::{Equation, StretchedModel};
use crate::error::{Error, Result};
use crate::kilbas_saigo::{ks_coefficients, KsFunction};

/// Absolute accuracy that defines the validity interval [0, T_max] of a
/// truncated series.
pub const VALIDITY_TOLERANCE: f64 = 1e-9;

/// |f_n| ≤ scale · (n + shift)^power · rate^n · c_n for n > N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Majorant {
    pub scale: f64,
    pub rate: f64,
    pub power: i32,
    pub shift: f64,
}

impl Majorant {
    pub(crate) fn zero() -> Self {
        Majorant { scale: 0.0, rate: 0.0, power: 0, shift: 0.0 }
    }
}

/// A truncated solution Σ_{n≤N} f_n t^{ρn} with a bound on the omitted tail.
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    model: StretchedModel,
    coeffs: Vec<f64>,
    /// ln c_0 … ln c_{N+1}
    ln_c: Vec<f64>,
    majorant: Majorant,
    /// Σ K_i E(−η_i t^ρ), real part taken; present when the series is known
    /// to be such a mixture, used beyond the validity interval.
    mixture: Option<Vec<(Complex64, Complex64)>>,
    t_max: f64,
}

impl SeriesSolution {
    pub(crate) fn build(
        model: StretchedModel,
        coeffs: Vec<f64>,
        ln_c: Vec<f64>,
        majorant: Majorant,
        mixture: Option<Vec<(Complex64, Complex64)>>,
    ) -> Self {
        debug_assert!(ln_c.len() > coeffs.len());
        let mut s = SeriesSolution { model, coeffs, ln_c, majorant, mixture, t_max: 0.0 };
        s.t_max = s.find_validity();
        s
    }

    /// An exact finite series (no tail).
    pub fn from_coefficients(model: StretchedModel, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parameter("at least one coefficient is required".into()));
        }
        let table = ks_coefficients(model.ks_params(), coeffs.len())?;
        let ln_c = (0..=coeffs.len()).map(|n| table.ln_coeff(n)).collect();
        Ok(Self::build(model, coeffs, ln_c, Majorant::zero(), None))
    }

    pub fn model(&self) -> StretchedModel {
        self.model
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// ρ = α + γ.
    pub fn exponent_step(&self) -> f64 {
        self.model.rho()
    }

    /// T_max: the tail bound plus rounding stays below [`VALIDITY_TOLERANCE`]
    /// on [0, T_max].
    pub fn validity_limit(&self) -> f64 {
        self.t_max
    }

    /// Copy with coefficient n replaced. The result is no longer tied to a
    /// closed form, so it is only evaluable inside its validity interval.
    pub fn with_coefficient(&self, n: usize, value: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[n] = value;
        Self::build(self.model, coeffs, self.ln_c.clone(), self.majorant, None)
    }

    /// Bound on Σ_{n>N} |f_n| t^{ρn}; `None` when the majorant ratio is not
    /// below one at this t.
    pub fn tail_bound(&self, t: f64) -> Option<f64> {
        let mj = &self.majorant;
        if mj.scale == 0.0 || t == 0.0 {
            return Some(0.0);
        }
        let n = self.n_max();
        let x = t.powf(self.model.rho());
        let k = (n + 1) as f64;
        let ln_u = mj.scale.ln()
            + mj.power as f64 * (k + mj.shift).ln()
            + k * (mj.rate * x).ln()
            + self.ln_c[n + 1];
        let ln_q = mj.power as f64 * ((k + 1.0 + mj.shift) / (k + mj.shift)).ln()
            + (mj.rate * x).ln()
            + crate::kilbas_saigo::ln_factor_bound(&self.model.ks_params(), n + 2);
        if ln_q >= 0.0 {
            return None;
        }
        let q = ln_q.exp();
        Some(ln_u.exp() / (1.0 - q))
    }

    /// Truncated sum with compensated summation and a rounding estimate.
    fn partial_sum(&self, t: f64) -> (f64, f64) {
        if t == 0.0 {
            return (self.coeffs[0], 0.0);
        }
        let x = t.powf(self.model.rho());
        let mut sum = 0.0;
        let mut comp = 0.0;
        let mut round = 0.0;
        let mut xn = 1.0;
        for (n, &f) in self.coeffs.iter().enumerate() {
            let term = f * xn;
            let y = term - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
            round += term.abs() * (4.0 + n as f64);
            xn *= x;
        }
        (sum, round * f64::EPSILON)
    }

    fn error_at(&self, t: f64) -> Option<f64> {
        let tail = self.tail_bound(t)?;
        let (_, round) = self.partial_sum(t);
        let e = tail + round;
        e.is_finite().then_some(e)
    }

    fn find_validity(&self) -> f64 {
        let ok = |t: f64| matches!(self.error_at(t), Some(e) if e <= VALIDITY_TOLERANCE);
        let (mut lo, mut hi) = (0.0, 1e-3);
        while ok(hi) {
            lo = hi;
            hi *= 2.0;
            if hi > 1e12 {
                return f64::INFINITY;
            }
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 * hi {
                break;
            }
        }
        lo
    }

    /// Value and absolute error bound inside the validity interval.
    pub fn eval_with_error(&self, t: f64) -> Result<(f64, f64)> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
        }
        if t > self.t_max {
            return Err(Error::Domain(format!(
                "t = {t} is outside the validity interval [0, {}]",
                self.t_max
            )));
        }
        let (v, round) = self.partial_sum(t);
        let tail = self.tail_bound(t).unwrap_or(f64::INFINITY);
        Ok((v, tail + round))
    }

    /// f(t). Beyond the validity interval mixtures of Kilbas-Saigo terms are
    /// evaluated through the certified function itself; other series fail.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if t <= self.t_max || !t.is_finite() {
            return self.eval_with_error(t).map(|(v, _)| v);
        }
        let Some(mixture) = &self.mixture else {
            return Err(Error::Domain(format!(
                "t = {t} is outside the validity interval [0, {}] and the series has no closed form",
                self.t_max
            )));
        };
        let f = KsFunction::with_tolerance(self.model.ks_params(), VALIDITY_TOLERANCE)?;
        let x = t.powf(self.model.rho());
        let mut acc = 0.0;
        for &(k, eta) in mixture {
            if eta.im == 0.0 && k.im == 0.0 {
                acc += k.re * f.eval(-eta.re * x)?.value;
            } else {
                acc += (k * f.eval_complex(-eta * x)?.value).re;
            }
        }
        Ok(acc)
    }

    /// Largest relative defect of the coefficient recurrence of `eq`.
    pub fn coefficient_defect(&self, eq: &Equation) -> f64 {
        let br = |n: usize| (self.ln_c[n - 1] - self.ln_c[n]).exp();
        let f = &self.coeffs;
        let mut worst: f64 = 0.0;
        let mut check = |lhs: f64, scale: f64| {
            if scale > 0.0 {
                worst = worst.max(lhs.abs() / scale);
            }
        };
        match *eq {
            Equation::FirstOrder { kappa } => {
                for n in 0..f.len().saturating_sub(1) {
                    let d = f[n + 1] * br(n + 1);
                    check(d + kappa * f[n], d.abs() + (kappa * f[n]).abs());
                }
            }
            Equation::SecondOrder { a, b } => {
                for n in 0..f.len().saturating_sub(2) {
                    let dd = f[n + 2] * br(n + 2) * br(n + 1);
                    let d = f[n + 1] * br(n + 1);
                    check(dd + a * d + b * f[n], dd.abs() + (a * d).abs() + (b * f[n]).abs());
                }
            }
        }
        worst
    }
}

/// g_n = f_{n+1}·[n+1]^ρ_α: the operator applied term by term.
pub fn apply_operator_to_series(sol: &SeriesSolution) -> SeriesSolution {
    let n = sol.n_max();
    let ln_c = &sol.ln_c;
    let coeffs: Vec<f64> = if n == 0 {
        vec![0.0]
    } else {
        (0..n).map(|k| sol.coeffs[k + 1] * (ln_c[k] - ln_c[k + 1]).exp()).collect()
    };
    let mj = sol.majorant;
    let majorant = if mj.scale == 0.0 {
        mj
    } else {
        Majorant { scale: mj.scale * mj.rate, rate: mj.rate, power: mj.power, shift: mj.shift + 1.0 }
    };
    let new_ln_c = ln_c[..coeffs.len() + 1].to_vec();
    let mixture = sol
        .mixture
        .as_ref()
        .map(|m| m.iter().map(|&(k, eta)| (-eta * k, eta)).collect());
    SeriesSolution::build(sol.model, coeffs, new_ln_c, majorant, mixture)
}

pub(crate) fn ln_coeff_vec(model: &StretchedModel, n_max: usize) -> Result<Vec<f64>> {
    let table = ks_coefficients(model.ks_params(), n_max + 1)?;
    Ok((0..=n_max + 1).map(|n| table.ln_coeff(n)).collect())
}

/// f_n = (−κ)^n f₀ / [n!]^ρ_α, i.e. f₀·E(−κ t^ρ).
pub fn solve_first_order(model: &StretchedModel, kappa: f64, f0: f64, n_max: usize) -> Result<SeriesSolution> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Parameter(format!("kappa must be positive, got {kappa}")));
    }
    if !f0.is_finite() {
        return Err(Error::Parameter(format!("f0 must be finite, got {f0}")));
    }
    if n_max < 1 {
        return Err(Error::Parameter("n_max must be at least 1".into()));
    }
    let ln_c = ln_coeff_vec(model, n_max)?;
    let ln_k = kappa.ln();
    let coeffs = (0..=n_max)
        .map(|n| {
            let v = f0 * (ln_c[n] + n as f64 * ln_k).exp();
            if n % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    let majorant = Majorant { scale: f0.abs(), rate: kappa, power: 0, shift: 0.0 };
    let mixture = vec![(Complex64::new(f0, 0.0), Complex64::new(kappa, 0.0))];
    Ok(SeriesSolution::build(*model, coeffs, ln_c, majorant, Some(mixture)))
}

/// Largest |left side| of `eq` over `t_grid`, evaluated from truncated
/// series of f, D f and (second order) D D f.
pub fn series_residual(sol: &SeriesSolution, eq: &Equation, t_grid: &[f64]) -> Result<f64> {
    let d1 = apply_operator_to_series(sol);
    let d2 = match eq {
        Equation::SecondOrder { .. } => Some(apply_operator_to_series(&d1)),
        Equation::FirstOrder { .. } => None,
    };
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        let f = sol.eval_with_error(t)?.0;
        let df = d1.eval_with_error(t)?.0;
        let r = match (eq, &d2) {
            (Equation::FirstOrder { kappa }, _) => df + kappa * f,
            (Equation::SecondOrder { a, b }, Some(d2)) => d2.eval_with_error(t)?.0 + a * df + b * f,
            _ => unreachable!(),
        };
        worst = worst.max(r.abs());
    }
    Ok(worst)
}
