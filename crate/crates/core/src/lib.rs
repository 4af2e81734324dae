//! Stretched relaxation: Kilbas-Saigo and double gamma functions, series
//! solvers for relaxation equations under the stretched operator
//! t^{−γ}·(Caputo derivative of order α), Laplace transforms and their
//! inversion, and exact simulation of the associated renewal and
//! time-changed Poisson counting processes.
//!
//! Modules, bottom up: [`specfun`] (Gamma family, double gamma),
//! [`kilbas_saigo`] (E_{a,m,l} with certified errors), [`fibpoly`],
//! [`relaxation`], [`transforms`] and [`stochastic`].

// `!(x > 0.0)` guards reject NaN as well; the Lanczos table keeps its published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod fibpoly;
pub mod kilbas_saigo;
pub mod quadrature;
pub mod relaxation;
pub mod specfun;
pub mod stochastic;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex;
