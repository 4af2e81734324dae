//! Gamma-family kernels and the double gamma function G(z;τ).
//!
//! G is evaluated from its integral representation for moderate |z| and from
//! the Stirling expansion above [`STIRLING_THRESHOLD`]; arguments with
//! Re z < 1 are first moved right with G(z+1;τ) = Γ(z/τ)G(z;τ).
//! The product definitions of G (with the constants C(τ), D(τ), where
//! C(1) = 1/2 and D(1) = 1 + γ_E) are not used for evaluation.

mod double_gamma;
mod gamma;

pub use double_gamma::{
    double_gamma, ln_double_gamma, ln_double_gamma_integral, DoubleGamma, STIRLING_THRESHOLD,
};
pub use gamma::{gamma, gamma_ratio, ln_abs_gamma, ln_gamma, ln_gamma_shift, ln_sin_pi, rgamma};
