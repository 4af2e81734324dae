use super::RngStream;
use crate::error::{param, Result};

/// Standard positive α-stable variable S with E e^{−κS} = e^{−κ^α}
/// (Kanter's representation). α = 1 returns 1.
pub fn sample_standard_stable(alpha: f64, rng: &mut RngStream) -> f64 {
    if alpha == 1.0 {
        return 1.0;
    }
    let v = std::f64::consts::PI * rng.open01();
    let e = -rng.open01().ln();
    let a = (alpha * v).sin() / v.sin().powf(1.0 / alpha);
    let b = (((1.0 - alpha) * v).sin() / e).powf((1.0 - alpha) / alpha);
    a * b
}

/// Increment A_α(s + dt) − A_α(s) =d dt^{1/α} S.
pub fn sample_stable_subordinator_increment(alpha: f64, dt: f64, rng: &mut RngStream) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(param(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(param(format!("dt must be positive, got {dt}")));
    }
    Ok(dt.powf(1.0 / alpha) * sample_standard_stable(alpha, rng))
}
