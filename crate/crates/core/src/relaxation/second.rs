use num_complex::Complex64;

use super::series::{ln_coeff_vec, Majorant, SeriesSolution};
use super::StretchedModel;
use crate::error::{param, Result};
use crate::fibpoly::bivariate_fib_table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootCase {
    /// b < a²/4
    DistinctReal,
    /// b = a²/4
    Confluent,
    /// b > a²/4; the solution is real but not a survival function
    ComplexPair,
}

/// D D f + a D f + b f = 0 with f(0) = f0 and (D f)(0) = df0.
///
/// Roots η₁,₂ = a/2 ∓ Ω with Ω = √(a²/4 − b). In the distinct and complex cases
/// f = K₁E(−η₁t^ρ) + K₂E(−η₂t^ρ); in the confluent case
/// f = K′₁E(−ηt^ρ) + K′₂ t^ρ E′(−ηt^ρ), and `k1`, `k2` hold K′₁, K′₂.
#[derive(Debug, Clone)]
pub struct SecondOrderSpec {
    pub model: StretchedModel,
    pub a: f64,
    pub b: f64,
    pub f0: f64,
    pub df0: f64,
    pub eta1: Complex64,
    pub eta2: Complex64,
    pub omega: Complex64,
    pub k1: Complex64,
    pub k2: Complex64,
    pub case: RootCase,
    pub warnings: Vec<String>,
}

/// Relative width of the band around b = a²/4 treated as confluent.
const CONFLUENT_REL: f64 = 1e-12;
/// Below |b − a²/4| < this · a² the distinct-root constants are ill-conditioned.
const CONDITIONING_REL: f64 = 1e-10;

impl SecondOrderSpec {
    /// Only the orders α, γ of `model` enter; its rate is not used.
    pub fn new(model: StretchedModel, a: f64, b: f64, f0: f64, df0: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(param(format!("a must be positive, got {a}")));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(param(format!("b must be positive, got {b}")));
        }
        if !(f0.is_finite() && df0.is_finite()) {
            return Err(param("initial values must be finite"));
        }
        let h = 0.25 * a * a;
        let disc = h - b;
        let mut warnings = Vec::new();
        let (case, eta1, eta2, omega, k1, k2);
        if disc.abs() <= CONFLUENT_REL * h {
            case = RootCase::Confluent;
            let eta = Complex64::new(0.5 * a, 0.0);
            eta1 = eta;
            eta2 = eta;
            omega = Complex64::new(0.0, 0.0);
            k1 = Complex64::new(f0, 0.0);
            k2 = Complex64::new(df0 + 0.5 * a * f0, 0.0);
        } else {
            omega = Complex64::new(disc, 0.0).sqrt();
            // larger root first, the smaller from the product to avoid cancellation
            eta2 = 0.5 * a + omega;
            eta1 = b / eta2;
            let d = eta2 - eta1;
            k1 = (df0 + eta2 * f0) / d;
            k2 = -(df0 + eta1 * f0) / d;
            case = if disc > 0.0 { RootCase::DistinctReal } else { RootCase::ComplexPair };
            if disc.abs() < CONDITIONING_REL * a * a {
                warnings.push(format!(
                    "near-confluent roots: |b - a^2/4| = {:e}; mixing constants are ill-conditioned",
                    disc.abs()
                ));
            }
            if case == RootCase::ComplexPair {
                warnings.push("complex roots: the solution is not a survival function".into());
            }
        }
        Ok(SecondOrderSpec { model, a, b, f0, df0, eta1, eta2, omega, k1, k2, case, warnings })
    }

    /// Solution coefficient f_n from the closed form, with its natural
    /// magnitude c_n·(|K₁||η₁|^n + |K₂||η₂|^n) (confluent: the two terms).
    pub(crate) fn closed_form_coeff(&self, n: usize, ln_c: f64) -> (f64, f64) {
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        match self.case {
            RootCase::DistinctReal => {
                let t1 = (ln_c + n as f64 * self.eta1.re.ln()).exp() * self.k1.re;
                let t2 = (ln_c + n as f64 * self.eta2.re.ln()).exp() * self.k2.re;
                (sign * (t1 + t2), t1.abs() + t2.abs())
            }
            RootCase::Confluent => {
                let eta = self.eta1.re;
                let p = (ln_c + (n as f64 - 1.0) * eta.ln()).exp();
                let t1 = self.k1.re * eta * p;
                let t2 = n as f64 * self.k2.re * p;
                (sign * (t1 - t2), t1.abs() + t2.abs())
            }
            RootCase::ComplexPair => {
                let w = (Complex64::new(ln_c, 0.0) + n as f64 * (-self.eta1).ln()).exp();
                let v = self.k1 * w;
                (2.0 * v.re, 2.0 * v.norm())
            }
        }
    }

    fn majorant(&self) -> Majorant {
        match self.case {
            RootCase::DistinctReal => Majorant {
                scale: self.k1.norm() + self.k2.norm(),
                rate: self.eta2.re,
                power: 0,
                shift: 0.0,
            },
            RootCase::Confluent => {
                let eta = self.eta1.re;
                Majorant { scale: self.k1.norm() + self.k2.norm() / eta, rate: eta, power: 1, shift: 0.0 }
            }
            RootCase::ComplexPair => {
                Majorant { scale: 2.0 * self.k1.norm(), rate: self.eta1.norm(), power: 0, shift: 0.0 }
            }
        }
    }
}

/// Coefficients from the closed-form mixture of Kilbas-Saigo functions.
pub fn solve_second_order(spec: &SecondOrderSpec, n_max: usize) -> Result<SeriesSolution> {
    if n_max < 2 {
        return Err(param("n_max must be at least 2"));
    }
    let ln_c = ln_coeff_vec(&spec.model, n_max)?;
    let coeffs = (0..=n_max).map(|n| spec.closed_form_coeff(n, ln_c[n]).0).collect();
    let mixture = match spec.case {
        RootCase::Confluent => None,
        RootCase::DistinctReal => Some(vec![(spec.k1, spec.eta1), (spec.k2, spec.eta2)]),
        RootCase::ComplexPair => Some(vec![(2.0 * spec.k1, spec.eta1)]),
    };
    let majorant = if spec.f0 == 0.0 && spec.df0 == 0.0 { Majorant::zero() } else { spec.majorant() };
    Ok(SeriesSolution::build(spec.model, coeffs, ln_c, majorant, mixture))
}

/// f_n = c_n·(U_n(−a,−b)·df0 − b·U_{n−1}(−a,−b)·f0) with U the bivariate
/// Fibonacci polynomials; independent of the root structure.
pub fn second_order_recurrence(spec: &SecondOrderSpec, n_max: usize) -> Result<Vec<f64>> {
    let ln_c = ln_coeff_vec(&spec.model, n_max)?;
    let u = bivariate_fib_table(n_max, -spec.a, -spec.b);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(spec.f0);
    for n in 1..=n_max {
        out.push(ln_c[n].exp() * (u[n] * spec.df0 - spec.b * u[n - 1] * spec.f0));
    }
    Ok(out)
}
