//! Laplace-domain objects: the transform of the Kilbas-Saigo function on a
//! Mellin-Barnes contour, the renewal and covariance transforms built on
//! g(η), the transform of the subordinator density, and numerical inversion.

mod inversion;
mod laplace;
mod renewal;

pub use inversion::{invert_laplace, invert_laplace_with, inversion_max_arg, InversionOptions, Inverted};
pub use laplace::{ks_laplace, ks_laplace_time_domain, ContourSpec, KsLaplace, LAPLACE_TOLERANCE};
pub use renewal::{covariance_lt, g_eta, renewal_function_lt, subordinator_density_lt, GEta, SubordinatorDensity};
