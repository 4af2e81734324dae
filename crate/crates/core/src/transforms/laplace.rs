use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{param, Error, Result};
use crate::kilbas_saigo::{GRatio, KsFunction, KsParams};
use crate::quadrature::{integrate, GkOptions};
use crate::specfun::{ln_gamma, ln_sin_pi};

/// Default relative tolerance of [`KsLaplace`] evaluations.
pub const LAPLACE_TOLERANCE: f64 = 1e-9;
const BUILD_TOLERANCE: f64 = 1e-11;
const MAX_LEVEL: u32 = 11;
const T_MAX: f64 = 3.5;
/// Smallest decay rate e^{−κ|Im s|} of the integrand accepted on the line.
const MIN_DECAY: f64 = 0.05;

/// Contour Re s = c for
/// L[E_{a,m,l}(−λt^ν)](z) = λ^{−1/ν}G(φ+aτ)/(νG(φ)) · (1/2πi)∫(λ^{−1/ν}z)^{−s}Θ(s)ds,
/// Θ(s) = Γ(s)Γ(u)Γ(1−u)G(φ−u)/G(φ+aτ−u), u = (1−s)/ν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub params: KsParams,
    pub nu: f64,
    pub lambda: f64,
    /// abscissa, c₀ < c < 1
    pub c: f64,
    /// largest |arg z| the node set must serve
    pub max_arg: f64,
    /// truncation height; the nodes cover [0, 2R] so that doubling R is checked
    pub r: f64,
    pub n_nodes: usize,
    pub tolerance: f64,
}

impl ContourSpec {
    pub fn new(params: KsParams, nu: f64, lambda: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(param(format!("nu must be positive, got {nu}")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(param(format!("lambda must be positive, got {lambda}")));
        }
        let mut spec = ContourSpec {
            params,
            nu,
            lambda,
            c: 0.0,
            max_arg: FRAC_PI_2,
            r: 0.0,
            n_nodes: 0,
            tolerance: LAPLACE_TOLERANCE,
        };
        spec.c = 0.5 * (spec.c0() + 1.0);
        Ok(spec)
    }

    /// c₀ = max(0, 1 − ν, 1 − ν(φ + aτ)).
    pub fn c0(&self) -> f64 {
        let p = &self.params;
        0f64.max(1.0 - self.nu).max(1.0 - self.nu * (p.phi() + p.a() * p.tau()))
    }

    /// Half-opening of the convergence sector, min([1 + (2−a)/ν]π/2, π).
    pub fn sector(&self) -> f64 {
        self.decay_rate().min(PI)
    }

    /// Exponential decay rate of |Θ(c + iy)| in |y|.
    fn decay_rate(&self) -> f64 {
        FRAC_PI_2 * (1.0 + (2.0 - self.params.a()) / self.nu)
    }

    pub fn with_c(mut self, c: f64) -> Result<Self> {
        let c0 = self.c0();
        if !(c > c0 && c < 1.0) {
            return Err(Error::Contour { c, c0 });
        }
        self.c = c;
        Ok(self)
    }

    pub fn with_max_arg(mut self, max_arg: f64) -> Result<Self> {
        let limit = self.sector();
        if !(max_arg >= 0.0 && max_arg < limit) {
            return Err(Error::Sector { arg: max_arg, limit });
        }
        if self.decay_rate() - max_arg < MIN_DECAY {
            return Err(Error::NonConvergence {
                what: "Laplace contour integral",
                detail: format!("|arg z| = {max_arg} is too close to the sector boundary {limit}"),
            });
        }
        self.max_arg = max_arg;
        Ok(self)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(param(format!("tolerance must be positive, got {tol}")));
        }
        self.tolerance = tol;
        Ok(self)
    }
}

struct Sums {
    value: Complex64,
    /// difference to the rule with every other node
    level_diff: f64,
    round: f64,
    /// contribution of [R, 2R]
    outer: f64,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    y: f64,
    /// tanh-sinh weight without the step h
    w: f64,
    level: u32,
    panel: u8,
    theta: Complex64,
}

/// The Laplace transform of E_{a,m,l}(−λt^ν) on a fixed contour; Θ is
/// tabulated once and every evaluation is a weighted sum.
#[derive(Debug, Clone)]
pub struct KsLaplace {
    spec: ContourSpec,
    nodes: Vec<Node>,
    level: u32,
    /// λ^{−1/ν}/(2πν)
    prefactor: f64,
    ln_lambda_scale: f64,
}

fn theta(ratio: &GRatio, phi: f64, nu: f64, ln_k: f64, s: Complex64) -> Result<Complex64> {
    let u = (1.0 - s) / nu;
    let lg = ln_gamma(s)? + PI.ln() - ln_sin_pi(u);
    match ratio.ln_ratio(phi - u)? {
        Some(r) => Ok((lg + r + ln_k).exp()),
        None => Ok(Complex64::new(0.0, 0.0)),
    }
}

impl KsLaplace {
    pub fn new(spec: ContourSpec) -> Result<Self> {
        let spec = spec.with_c(spec.c)?.with_max_arg(spec.max_arg)?;
        let p = spec.params;
        let ratio = GRatio::new(&p)?;
        let phi = p.phi();
        // ln K = ln G(φ+aτ) − ln G(φ)
        let ln_k = -ratio
            .ln_ratio(Complex64::new(phi, 0.0))?
            .ok_or_else(|| Error::Domain("G(φ) vanishes".into()))?
            .re;
        let kappa = spec.decay_rate() - spec.max_arg;
        let r = 46.0 / kappa + 4.0;
        let eval = |y: f64| theta(&ratio, phi, spec.nu, ln_k, Complex64::new(spec.c, y));

        let mut nodes: Vec<Node> = Vec::new();
        let add_level = |level: u32, nodes: &mut Vec<Node>| -> Result<()> {
            let h = 0.5f64.powi(level as i32);
            let kmax = (T_MAX / h).floor() as i64;
            for panel in 0..2u8 {
                let (lo, hi) = if panel == 0 { (0.0, r) } else { (r, 2.0 * r) };
                let mid = 0.5 * (lo + hi);
                let half = 0.5 * (hi - lo);
                for k in -kmax..=kmax {
                    if level > 0 && k % 2 == 0 {
                        continue;
                    }
                    let t = k as f64 * h;
                    let sh = FRAC_PI_2 * t.sinh();
                    let w = half * FRAC_PI_2 * t.cosh() / (sh.cosh() * sh.cosh());
                    if w < 1e-20 * half {
                        continue;
                    }
                    let y = mid + half * sh.tanh();
                    nodes.push(Node { y, w, level, panel, theta: eval(y)? });
                }
            }
            Ok(())
        };
        let ln_scale = -spec.lambda.ln() / spec.nu;
        let mut engine = KsLaplace {
            spec,
            nodes: Vec::new(),
            level: 0,
            prefactor: ln_scale.exp() / (2.0 * PI * spec.nu),
            ln_lambda_scale: ln_scale,
        };
        for level in 0..=3 {
            add_level(level, &mut nodes)?;
        }
        let mut level = 3;
        loop {
            engine.nodes = nodes.clone();
            engine.level = level;
            let converged = engine.probes().iter().all(|&z| {
                let sm = engine.sums(z);
                sm.level_diff <= (BUILD_TOLERANCE * sm.value.norm()).max(16.0 * sm.round)
            });
            if converged {
                break;
            }
            if level == MAX_LEVEL {
                return Err(Error::NonConvergence {
                    what: "Laplace contour node set",
                    detail: format!("level {MAX_LEVEL} did not reach {BUILD_TOLERANCE:e}"),
                });
            }
            level += 1;
            add_level(level, &mut nodes)?;
        }
        engine.spec.r = r;
        engine.spec.n_nodes = engine.nodes.len();
        Ok(engine)
    }

    fn probes(&self) -> Vec<Complex64> {
        let scale = (-self.ln_lambda_scale).exp();
        let mut out = Vec::new();
        for r in [1e-4, 1e-2, 1.0, 1e2, 1e4, 1e6] {
            for arg in [0.0, self.spec.max_arg] {
                out.push(Complex64::from_polar(r * scale, arg));
            }
        }
        out
    }

    pub fn contour(&self) -> &ContourSpec {
        &self.spec
    }

    fn sums(&self, z: Complex64) -> Sums {
        let lz = Complex64::new(z.norm().ln() + self.ln_lambda_scale, z.arg());
        let c = self.spec.c;
        let h_fine = 0.5f64.powi(self.level as i32);
        let mut fine = Complex64::new(0.0, 0.0);
        let mut coarse = Complex64::new(0.0, 0.0);
        let mut outer = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for n in &self.nodes {
            let s = Complex64::new(c, n.y);
            let up = (-s * lz).exp() * n.theta;
            let down = (-s.conj() * lz).exp() * n.theta.conj();
            let v = (up + down) * n.w;
            fine += v;
            abs += v.norm();
            if n.level < self.level {
                coarse += v;
            }
            if n.panel == 1 {
                outer += v;
            }
        }
        let fine = fine * h_fine * self.prefactor;
        let coarse = coarse * 2.0 * h_fine * self.prefactor;
        let outer = outer * h_fine * self.prefactor;
        Sums {
            value: fine,
            level_diff: (fine - coarse).norm(),
            round: 8.0 * f64::EPSILON * abs * h_fine * self.prefactor,
            outer: outer.norm(),
        }
    }

    /// Transform value with an estimate of the absolute error.
    pub fn eval_with_error(&self, z: Complex64) -> Result<(Complex64, f64)> {
        if !(z.norm() > 0.0 && z.norm().is_finite()) {
            return Err(Error::Domain(format!("z must be nonzero and finite, got {z}")));
        }
        if z.arg().abs() > self.spec.max_arg {
            return Err(Error::Sector { arg: z.arg().abs(), limit: self.spec.max_arg });
        }
        let Sums { value: v, level_diff, round, outer } = self.sums(z);
        let tol = self.spec.tolerance * v.norm();
        if round > tol {
            return Err(Error::ToleranceNotAchievable {
                tol: self.spec.tolerance,
                detail: format!("cancellation in the contour sum at z = {z}"),
            });
        }
        let e = level_diff + round;
        if outer > tol {
            return Err(Error::NonConvergence {
                what: "Laplace contour integral",
                detail: format!("doubling R = {} changes the result by {outer:e}", self.spec.r),
            });
        }
        if e > tol {
            return Err(Error::NonConvergence {
                what: "Laplace contour integral",
                detail: format!("quadrature estimate {e:e} exceeds {tol:e} at z = {z}"),
            });
        }
        Ok((v, e + outer))
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_with_error(z).map(|(v, _)| v)
    }

    pub fn eval_real(&self, eta: f64) -> Result<f64> {
        self.eval(Complex64::new(eta, 0.0)).map(|v| v.re)
    }
}

/// ∫₀^∞ e^{−zt} E_{a,m,l}(−λt^ν) dt on the Mellin-Barnes contour.
pub fn ks_laplace(params: KsParams, nu: f64, lambda: f64, z: Complex64) -> Result<Complex64> {
    let spec = ContourSpec::new(params, nu, lambda)?;
    let arg = z.arg().abs();
    if arg >= spec.sector() {
        return Err(Error::Sector { arg, limit: spec.sector() });
    }
    let spec = spec.with_max_arg(arg)?;
    KsLaplace::new(spec)?.eval(z)
}

/// The same transform by adaptive quadrature in t (Re z > 0 only).
pub fn ks_laplace_time_domain(params: KsParams, nu: f64, lambda: f64, z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!("time-domain quadrature needs Re z > 0, got {z}")));
    }
    let f = KsFunction::with_tolerance(params, 1e-12)?;
    let t_end = 40.0 / z.re;
    // crude break points where e^{−zt} oscillates or the power t^ν turns
    let mut breaks = vec![0.0];
    let mut t = 1e-6 * t_end;
    while t < t_end {
        breaks.push(t);
        t *= 4.0;
    }
    breaks.push(t_end);
    let opts = GkOptions { abs_tol: 1e-16, rel_tol: 1e-12, max_intervals: 20_000 };
    let (v, _) = integrate(
        |t: f64| -> Result<Complex64> {
            let e = if t == 0.0 { 1.0 } else { f.eval(-lambda * t.powf(nu))?.value };
            Ok((-z * t).exp() * e)
        },
        &breaks,
        opts,
    )?;
    Ok(v)
}
