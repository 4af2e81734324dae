//! Samplers for Z_{α,γ}, the interarrival law and the counting processes,
//! and the analytic pmfs and moments they are checked against.
//!
//! Every Monte Carlo routine takes an [`RngStream`]; batches use child
//! streams derived from the batch index, so output is reproducible for a
//! given (seed, stream) regardless of thread count.

mod interarrival;
mod mc;
mod moments;
mod pmf;
mod process;
mod registry;
mod rng;
mod stable;
mod zsampler;

pub use interarrival::{
    interarrival_mean, interarrival_registry, FastInterarrival, InterarrivalRegistry, InterarrivalSampler,
    InverseCdfInterarrival,
};
pub use mc::{
    empirical_pmf, interarrival_draws, ks_statistic, laskin_counts, mean_and_std_error, pearson,
    renewal_counts, renewal_vs_laskin_discrepancy, run_batches, z_draws, BinComparison, Discrepancy, BATCH_SIZE,
};
pub use moments::{
    moments_laskin, moments_laskin_analytic, moments_laskin_mc, product_constant, MomentMode, MomentSummary,
};
pub use pmf::{
    mean_second_order, pmf_hat, pmf_laskin, pmf_registry, pmf_second_order, survival_hat, survival_second_order,
    HatMixture, LaskinPmf, PmfConfig, PmfKind, PmfRegistry, PmfTable,
};
pub use process::{
    sample_poisson, simulate_laskin, simulate_renewal, LaskinStreams, RenewalTrajectory, DEFAULT_DRAW_BUDGET,
};
pub use registry::{Factory, Registry};
pub use rng::{RngStream, RNG_ALGORITHM};
pub use stable::{sample_stable_subordinator_increment, sample_standard_stable};
pub use zsampler::{
    z_mean, z_sampler_registry, BetaProductSampler, PathConfig, PathSampler, ZSampler, ZSamplerRegistry,
    DEFAULT_BETA_FACTORS,
};
