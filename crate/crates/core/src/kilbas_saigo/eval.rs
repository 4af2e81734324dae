use num_complex::Complex64;
use std::sync::OnceLock;

use super::coeffs::{ln_factor, ln_factor_bound};
use super::mellin::MellinSurvival;
use super::KsParams;
use crate::error::{param, Error, Result};
use crate::specfun::{gamma, rgamma};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const MAX_DERIVATIVE_ORDER: usize = 128;

const TABLE_PREFIX: usize = 256;
const DEFAULT_BUDGET: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Series,
    MellinBarnes,
}

/// A value with an absolute error bound. For [`Route::Series`] the bound is
/// the certified tail plus a rounding estimate; for [`Route::MellinBarnes`] it
/// is the quadrature's own error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certified<T> {
    pub value: T,
    pub error: f64,
    pub route: Route,
    pub terms: usize,
}

/// Evaluator for one parameter triple. Holds a coefficient prefix and, once
/// needed, the Mellin-Barnes node set for large negative arguments.
#[derive(Debug)]
pub struct KsFunction {
    params: KsParams,
    tol: f64,
    budget: usize,
    ln_coeffs: Vec<f64>,
    mellin: OnceLock<std::result::Result<MellinSurvival, Error>>,
}

#[derive(Default, Clone, Copy)]
struct Kahan {
    sum: Complex64,
    comp: Complex64,
}

impl Kahan {
    fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

impl KsFunction {
    pub fn new(params: KsParams) -> Result<Self> {
        Self::with_tolerance(params, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(params: KsParams, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(param(format!("tolerance must be positive, got {tol}")));
        }
        let mut ln_coeffs = Vec::with_capacity(TABLE_PREFIX + 1);
        ln_coeffs.push(0.0);
        let mut acc = 0.0;
        for k in 1..=TABLE_PREFIX {
            acc += ln_factor(&params, k)?;
            ln_coeffs.push(acc);
        }
        Ok(KsFunction { params, tol, budget: DEFAULT_BUDGET, ln_coeffs, mellin: OnceLock::new() })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.max(1);
        self
    }

    pub fn params(&self) -> KsParams {
        self.params
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// ln c_k, continuing the running product past the stored prefix.
    fn ln_coeff_from(&self, k: usize, prev: f64) -> Result<f64> {
        if k < self.ln_coeffs.len() {
            Ok(self.ln_coeffs[k])
        } else {
            Ok(prev + ln_factor(&self.params, k)?)
        }
    }

    fn series(&self, z: Complex64, n: usize) -> Result<Certified<Complex64>> {
        self.series_tol(z, n, self.tol)
    }

    /// Σ_{k≥n} c_k k!/(k−n)! z^{k−n} with a certified tail.
    fn series_tol(&self, z: Complex64, n: usize, tol: f64) -> Result<Certified<Complex64>> {
        let mut ln_c = 0.0;
        for k in 1..=n {
            ln_c = self.ln_coeff_from(k, ln_c)?;
        }
        // ln n!
        let mut ln_falling: f64 = (1..=n).map(|j| (j as f64).ln()).sum();
        if z == Complex64::new(0.0, 0.0) {
            return Ok(Certified {
                value: Complex64::new((ln_c + ln_falling).exp(), 0.0),
                error: 0.0,
                route: Route::Series,
                terms: 1,
            });
        }
        let ln_abs = z.norm().ln();
        let real = z.im == 0.0;
        let arg = z.arg();
        let eps = f64::EPSILON;
        let mut acc = Kahan::default();
        let mut abs_sum = 0.0;
        let mut round = 0.0;
        let mut k = n;
        loop {
            let j = (k - n) as f64;
            let ln_mag = ln_c + ln_falling + j * ln_abs;
            let mag = ln_mag.exp();
            let term = if real {
                let neg = z.re < 0.0 && (k - n) % 2 == 1;
                Complex64::new(if neg { -mag } else { mag }, 0.0)
            } else {
                Complex64::from_polar(mag, j * arg)
            };
            if !mag.is_finite() {
                return Err(Error::ToleranceNotAchievable {
                    tol,
                    detail: format!("series terms overflow at |z| = {}", z.norm()),
                });
            }
            acc.add(term);
            abs_sum += mag;
            round += mag * eps * (8.0 + 2.0 * k as f64 + ln_c.abs() + j * ln_abs.abs());
            if round > tol {
                return Err(Error::ToleranceNotAchievable {
                    tol,
                    detail: format!(
                        "cancellation: Σ|terms| ≈ {abs_sum:.3e} at |z| = {}",
                        z.norm()
                    ),
                });
            }
            // majorant ratio for the next term
            let next = k + 1;
            let ln_q = ln_factor_bound(&self.params, next)
                + ((next as f64) / ((next - n) as f64)).ln()
                + ln_abs;
            if ln_q < 0.0 {
                let q = ln_q.exp();
                let tail = mag * q / (1.0 - q);
                if tail <= 0.01 * tol && tail + round <= tol {
                    return Ok(Certified {
                        value: acc.sum,
                        error: tail + round,
                        route: Route::Series,
                        terms: k - n + 1,
                    });
                }
            }
            if next - n > self.budget {
                return Err(Error::ToleranceNotAchievable {
                    tol,
                    detail: format!("tail not certified within {} terms", self.budget),
                });
            }
            ln_c = self.ln_coeff_from(next, ln_c)?;
            ln_falling += ((next as f64) / ((next - n) as f64)).ln();
            k = next;
        }
    }

    pub fn eval_complex(&self, z: Complex64) -> Result<Certified<Complex64>> {
        self.series(z, 0)
    }

    /// E(x) for real x. Negative arguments beyond the series' reach are
    /// evaluated on the Mellin-Barnes route.
    pub fn eval(&self, x: f64) -> Result<Certified<f64>> {
        if !x.is_finite() {
            return Err(param(format!("argument must be finite, got {x}")));
        }
        match self.series(Complex64::new(x, 0.0), 0) {
            Ok(c) => Ok(Certified { value: c.value.re, error: c.error, route: c.route, terms: c.terms }),
            Err(Error::ToleranceNotAchievable { .. }) if x < 0.0 => {
                let mb = self.mellin()?;
                let (value, error) = mb.eval_with_error(-x);
                if error > self.tol.max(1e-9 * value.abs()) {
                    return Err(Error::ToleranceNotAchievable {
                        tol: self.tol,
                        detail: format!("Mellin-Barnes estimate {error:e} at x = {x}"),
                    });
                }
                Ok(Certified { value, error, route: Route::MellinBarnes, terms: mb.nodes() })
            }
            Err(e) => Err(e),
        }
    }

    /// n-th derivative at real x by the term-wise differentiated series.
    pub fn derivative(&self, n: usize, x: f64) -> Result<Certified<f64>> {
        self.derivative_with_tolerance(n, x, self.tol)
    }

    /// [`derivative`](Self::derivative) with an absolute tolerance for this
    /// call only. Useful when the derivative is scaled by a small weight.
    pub fn derivative_with_tolerance(&self, n: usize, x: f64, tol: f64) -> Result<Certified<f64>> {
        if n > MAX_DERIVATIVE_ORDER {
            return Err(param(format!("derivative order {n} exceeds {MAX_DERIVATIVE_ORDER}")));
        }
        if !(tol > 0.0) {
            return Err(param(format!("tolerance must be positive, got {tol}")));
        }
        match self.series_tol(Complex64::new(x, 0.0), n, tol) {
            Ok(c) => Ok(Certified { value: c.value.re, error: c.error, route: c.route, terms: c.terms }),
            Err(Error::ToleranceNotAchievable { .. }) if x < 0.0 => {
                let mb = self.mellin()?;
                let (value, error) = mb.derivative_with_error(n, -x);
                if error > tol.max(1e-9 * value.abs()) {
                    return Err(Error::ToleranceNotAchievable {
                        tol,
                        detail: format!("Mellin-Barnes estimate {error:e} for derivative {n} at x = {x}"),
                    });
                }
                Ok(Certified { value, error, route: Route::MellinBarnes, terms: mb.nodes() })
            }
            Err(e) => Err(e),
        }
    }

    /// E(−x) for x ≥ 0.
    pub fn survival(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Err(Error::Domain(format!("survival argument must be nonnegative, got {x}")));
        }
        Ok(self.eval(-x)?.value)
    }

    pub fn mellin(&self) -> Result<&MellinSurvival> {
        self.mellin
            .get_or_init(|| MellinSurvival::new(self.params))
            .as_ref()
            .map_err(|e| e.clone())
    }
}

pub fn ks_eval(params: KsParams, x: f64) -> Result<Certified<f64>> {
    KsFunction::new(params)?.eval(x)
}

pub fn ks_eval_complex(params: KsParams, z: Complex64) -> Result<Certified<Complex64>> {
    KsFunction::new(params)?.eval_complex(z)
}

pub fn ks_derivative(params: KsParams, n: usize, x: f64) -> Result<Certified<f64>> {
    KsFunction::new(params)?.derivative(n, x)
}

/// Two-sided bound 1/(1+Γ(1−a)x) ≤ E_{a,m,m−1}(−x) ≤ 1/(1 + Γ(1+a(m−1))/Γ(1+am)·x).
pub fn ks_bounds(a: f64, m: f64, x: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&a) {
        return Err(param(format!("a must lie in [0, 1], got {a}")));
    }
    if !(m > 0.0) {
        return Err(param(format!("m must be positive, got {m}")));
    }
    if !(x >= 0.0) {
        return Err(param(format!("x must be nonnegative, got {x}")));
    }
    let lower = if a == 1.0 { 0.0 } else { 1.0 / (1.0 + gamma(1.0 - a)? * x) };
    let ratio = crate::specfun::gamma_ratio(1.0 + a * (m - 1.0), 1.0 + a * m)?;
    let upper = 1.0 / (1.0 + ratio * x);
    Ok((if x == 0.0 { 1.0 } else { lower }, upper))
}

impl KsParams {
    /// [`ks_bounds`] for these parameters; only defined when l = m − 1.
    pub fn bounds(&self, x: f64) -> Result<(f64, f64)> {
        if (self.l() - (self.m() - 1.0)).abs() > 1e-12 * self.m().max(1.0) {
            return Err(Error::Scope(format!(
                "the two-sided bound needs l = m - 1, got m = {}, l = {}",
                self.m(),
                self.l()
            )));
        }
        ks_bounds(self.a(), self.m(), x)
    }
}

/// Leading term Γ(1+a(l−m+1))/Γ(1+a(l−m)) · z⁻¹ of E(−z) as z → ∞.
pub fn ks_asymptotic(params: KsParams, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(param(format!("z must be positive, got {z}")));
    }
    let (a, m, l) = (params.a(), params.m(), params.l());
    Ok(gamma(1.0 + a * (l - m + 1.0))? * rgamma(1.0 + a * (l - m)) / z)
}
