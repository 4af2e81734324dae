use super::KsParams;
use crate::error::{Error, Result};
use crate::specfun::ln_gamma_shift;

/// ln of the k-th coefficient factor Γ(X)/Γ(X+a), X = 1 + a((k−1)m + l).
pub(crate) fn ln_factor(p: &KsParams, k: usize) -> Result<f64> {
    let x = p.factor_arg(k);
    Ok(-ln_gamma_shift(x, p.a())?)
}

/// ln of the Gautschi majorant (1 + 1/X)^{1−a} / X^a of the k-th factor.
pub(crate) fn ln_factor_bound(p: &KsParams, k: usize) -> f64 {
    let x = p.factor_arg(k);
    let a = p.a();
    (1.0 - a) * (1.0 / x).ln_1p() - a * x.ln()
}

/// Coefficients c₀ … c_N of a Kilbas-Saigo series, held in log space.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    params: KsParams,
    ln_coeffs: Vec<f64>,
}

/// Largest index accepted by [`ks_coefficients`].
const MAX_TABLE: usize = 5_000_000;

pub fn ks_coefficients(params: KsParams, n_max: usize) -> Result<CoefficientTable> {
    CoefficientTable::new(params, n_max)
}

impl CoefficientTable {
    pub fn new(params: KsParams, n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::Parameter("n_max must be at least 1".into()));
        }
        if n_max > MAX_TABLE {
            return Err(Error::Overflow(format!("n_max = {n_max} exceeds the table limit {MAX_TABLE}")));
        }
        let mut ln_coeffs = Vec::with_capacity(n_max + 1);
        ln_coeffs.push(0.0);
        let mut acc = 0.0;
        for k in 1..=n_max {
            acc += ln_factor(&params, k)?;
            ln_coeffs.push(acc);
        }
        Ok(CoefficientTable { params, ln_coeffs })
    }

    pub fn params(&self) -> KsParams {
        self.params
    }

    pub fn n_max(&self) -> usize {
        self.ln_coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.ln_coeffs[n].exp()
    }

    pub fn ln_coeff(&self, n: usize) -> f64 {
        self.ln_coeffs[n]
    }

    pub fn coeffs(&self) -> Vec<f64> {
        self.ln_coeffs.iter().map(|l| l.exp()).collect()
    }

    /// Upper bound on Σ_{n>N} c_n R^n, or `None` when the majorant ratio at
    /// N+1 is not below one (the disk is too large for this table).
    pub fn tail_bound(&self, radius: f64) -> Option<f64> {
        let n = self.n_max();
        if radius == 0.0 {
            return Some(0.0);
        }
        let q = (ln_factor_bound(&self.params, n + 1) + radius.ln()).exp();
        if q >= 1.0 {
            return None;
        }
        Some((self.ln_coeffs[n] + n as f64 * radius.ln()).exp() * q / (1.0 - q))
    }
}

/// The closed coefficient bound c_n ≤ C q^n / ((n−1)!)^a for n > N, with the
/// constants made explicit (ρ = am plays the role of α+γ, al that of γ).
#[derive(Debug, Clone, Copy)]
pub struct AppendixBound {
    pub threshold: usize,
    pub constant: f64,
    pub ratio: f64,
    a: f64,
}

impl AppendixBound {
    pub fn new(p: &KsParams) -> Self {
        let a = p.a();
        let rho = a * p.m();
        let g = a * p.l();
        let mut threshold = 0usize;
        let mut k = 1usize;
        while g + (k as f64 - 1.0) * rho < 0.0 {
            threshold = k;
            k += 1;
        }
        let mut c1 = 1.0;
        for k in 1..=threshold {
            c1 *= (1.0 + 1.0 / (1.0 + g + (k as f64 - 1.0) * rho)).powf(1.0 - a);
        }
        let c2 = 2f64.powf(-(threshold as f64) * (1.0 - a)) * c1;
        let constant = ((1.0 + g) / rho).powf(-a) * c2;
        let ratio = 2f64.powf(1.0 - a) / rho.powf(a);
        AppendixBound { threshold, constant, ratio, a }
    }

    /// The bound for index n, defined for n > threshold.
    pub fn bound(&self, n: usize) -> Option<f64> {
        if n <= self.threshold || n == 0 {
            return None;
        }
        let mut ln_fact = 0.0;
        for j in 2..n {
            ln_fact += (j as f64).ln();
        }
        Some((self.constant.ln() + n as f64 * self.ratio.ln() - self.a * ln_fact).exp())
    }
}
