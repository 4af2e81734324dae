//! Adaptive Gauss-Kronrod and tanh-sinh rules for real and complex integrands.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

pub trait Scalar: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(self) -> f64;
}

impl Scalar for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: Scalar, F: FnMut(f64) -> Result<T>>(f: &mut F, a: f64, b: f64) -> Result<(T, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x)? + f(c + x)?;
        kron = kron + s * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    Ok((kron, (kron - gauss).magnitude()))
}

#[derive(Debug, Clone, Copy)]
pub struct GkOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for GkOptions {
    fn default() -> Self {
        GkOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_intervals: 2000 }
    }
}

/// Globally adaptive 7/15-point Gauss-Kronrod over the given breakpoints.
/// Returns the integral and its estimated absolute error.
pub fn integrate<T: Scalar, F: FnMut(f64) -> Result<T>>(
    mut f: F,
    breakpoints: &[f64],
    opts: GkOptions,
) -> Result<(T, f64)> {
    let mut pieces: Vec<(f64, f64, T, f64)> = Vec::new();
    for w in breakpoints.windows(2) {
        let (v, e) = gk15(&mut f, w[0], w[1])?;
        pieces.push((w[0], w[1], v, e));
    }
    loop {
        let total = pieces.iter().fold(T::default(), |s, p| s + p.2);
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if err <= opts.abs_tol.max(opts.rel_tol * total.magnitude()) {
            return Ok((total, err));
        }
        if pieces.len() >= opts.max_intervals {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                detail: format!("error estimate {err:e} after {} intervals", pieces.len()),
            });
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty interval list");
        let (a, b, _, _) = pieces.swap_remove(idx);
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                detail: "interval underflow".into(),
            });
        }
        let (v1, e1) = gk15(&mut f, a, m)?;
        let (v2, e2) = gk15(&mut f, m, b)?;
        pieces.push((a, m, v1, e1));
        pieces.push((m, b, v2, e2));
    }
}

/// Tanh-sinh quadrature on [a, b], halving the step until two successive
/// levels agree to `rel_tol` (relative to the running value, floored by `abs_tol`).
pub fn tanh_sinh<T: Scalar, F: FnMut(f64) -> Result<T>>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_level: u32,
) -> Result<(T, f64)> {
    use std::f64::consts::FRAC_PI_2;
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let t_max = 3.2;
    let node = |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        let x = u.tanh();
        let w = FRAC_PI_2 * t.cosh() / (ch * ch);
        (x, w)
    };
    let mut h = 0.5;
    let mut sum = f(c)? * node(0.0).1;
    let mut k = 1usize;
    loop {
        let t = k as f64 * h;
        if t > t_max {
            break;
        }
        let (x, w) = node(t);
        sum = sum + (f(c + half * x)? + f(c - half * x)?) * w;
        k += 1;
    }
    let mut prev = sum * (h * half);
    for _ in 1..=max_level {
        h *= 0.5;
        let mut k = 1usize;
        loop {
            let t = k as f64 * h;
            if t > t_max {
                break;
            }
            let (x, w) = node(t);
            sum = sum + (f(c + half * x)? + f(c - half * x)?) * w;
            k += 2;
        }
        let cur = sum * (h * half);
        let diff = (cur - prev).magnitude();
        if diff <= abs_tol.max(rel_tol * cur.magnitude()) {
            return Ok((cur, diff));
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        what: "tanh-sinh quadrature",
        detail: format!("no agreement after {max_level} levels"),
    })
}
