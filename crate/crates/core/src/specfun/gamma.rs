use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln(2π)/2
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

const POLE_EPS: f64 = 1e-12;

fn pole_check_real(x: f64) -> Result<()> {
    if x <= 0.5 {
        let k = (-x).round();
        if k >= 0.0 && (x + k).abs() < POLE_EPS {
            return Err(Error::Pole(format!("{x}")));
        }
    }
    Ok(())
}

fn pole_check(z: Complex64) -> Result<()> {
    if z.re <= 0.5 {
        let k = (-z.re).round();
        if k >= 0.0 && (z + k).norm() < POLE_EPS {
            return Err(Error::Pole(format!("{z}")));
        }
    }
    Ok(())
}

fn lanczos_sum(z: Complex64) -> Complex64 {
    // z is the shifted argument (original minus one)
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    x
}

fn lanczos_sum_real(z: f64) -> f64 {
    let mut x = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    x
}

/// log(sin(πz)) without overflow for large |Im z|. Any branch; callers exponentiate.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 15.0 {
        return (z * PI).sin().ln();
    }
    if z.im > 0.0 {
        // sin(πz) = e^{-iπz} (e^{2iπz} - 1) / (2i)
        let e = (2.0 * PI * i * z).exp();
        -i * PI * z + ((e - 1.0) / (2.0 * i)).ln()
    } else {
        let e = (-2.0 * PI * i * z).exp();
        i * PI * z + ((1.0 - e) / (2.0 * i)).ln()
    }
}

/// Logarithm of Γ(z) on the branch that is real for real positive z and
/// continuous in the right half plane.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    pole_check(z)?;
    if z.re < 0.5 {
        let refl = Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(1.0 - z)?;
        return Ok(refl);
    }
    let zm = z - 1.0;
    let t = zm + LANCZOS_G + 0.5;
    Ok(HALF_LN_2PI + (zm + 0.5) * t.ln() - t + lanczos_sum(zm).ln())
}

/// ln|Γ(x)| and the sign of Γ(x) for real x.
pub fn ln_abs_gamma(x: f64) -> Result<(f64, f64)> {
    pole_check_real(x)?;
    if !x.is_finite() {
        return Err(Error::Parameter(format!("non-finite gamma argument {x}")));
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        let (lg, _) = ln_abs_gamma(1.0 - x)?;
        let sign = if s < 0.0 { -1.0 } else { 1.0 };
        return Ok((PI.ln() - s.abs().ln() - lg, sign));
    }
    let zm = x - 1.0;
    let t = zm + LANCZOS_G + 0.5;
    Ok((HALF_LN_2PI + (zm + 0.5) * t.ln() - t + lanczos_sum_real(zm).ln(), 1.0))
}

pub fn gamma(x: f64) -> Result<f64> {
    let (lg, s) = ln_abs_gamma(x)?;
    Ok(s * lg.exp())
}

/// ln Γ(x + d) − ln Γ(x) for x > 0 and x + d > 0, avoiding the cancellation
/// of two large logarithms when d is small compared with x.
pub fn ln_gamma_shift(x: f64, d: f64) -> Result<f64> {
    let y = x + d;
    if !(x > 0.0 && y > 0.0) {
        let (a, sa) = ln_abs_gamma(y)?;
        let (b, sb) = ln_abs_gamma(x)?;
        if sa * sb < 0.0 {
            return Err(Error::Domain(format!("Γ({y})/Γ({x}) is negative")));
        }
        return Ok(a - b);
    }
    if x < 0.5 || y < 0.5 {
        return Ok(ln_abs_gamma(y)?.0 - ln_abs_gamma(x)?.0);
    }
    let tx = x - 0.5 + LANCZOS_G;
    // (y-1/2) ln t_y - t_y - (x-1/2) ln t_x + t_x
    let main = (y - 0.5) * (d / tx).ln_1p() + d * tx.ln() - d;
    let sums = (lanczos_sum_real(y - 1.0) / lanczos_sum_real(x - 1.0)).ln();
    Ok(main + sums)
}

/// Γ(p)/Γ(q) with the correct sign, evaluated in log space.
pub fn gamma_ratio(p: f64, q: f64) -> Result<f64> {
    pole_check_real(p)?;
    pole_check_real(q)?;
    if p > 0.0 && q > 0.0 {
        return Ok(ln_gamma_shift(q, p - q)?.exp());
    }
    let (lp, sp) = ln_abs_gamma(p)?;
    let (lq, sq) = ln_abs_gamma(q)?;
    Ok(sp * sq * (lp - lq).exp())
}

/// 1/Γ(x), returning zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    match ln_abs_gamma(x) {
        Ok((lg, s)) => s * (-lg).exp(),
        Err(_) => 0.0,
    }
}
