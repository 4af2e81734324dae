//! Parallel Monte Carlo batches and the summary statistics used on them.

use rayon::prelude::*;

use super::interarrival::InterarrivalSampler;
use super::pmf::LaskinPmf;
use super::process::{simulate_laskin, simulate_renewal, LaskinStreams};
use super::zsampler::ZSampler;
use super::RngStream;
use crate::error::{param, Result};

/// Draws per batch. Batch b always uses `root.child(b)`, so results do not
/// depend on the number of worker threads.
pub const BATCH_SIZE: usize = 4096;

/// Runs `draw` over `draws` items split into batches, in parallel, and
/// returns the items in batch order.
pub fn run_batches<T, F>(root: &RngStream, draws: usize, draw: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream) -> Result<T> + Sync,
{
    let batches = draws.div_ceil(BATCH_SIZE);
    let out: Vec<Vec<T>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = root.child(b as u64);
            let n = BATCH_SIZE.min(draws - b * BATCH_SIZE);
            (0..n).map(|_| draw(&mut rng)).collect::<Result<Vec<T>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(out.into_iter().flatten().collect())
}

pub fn z_draws(sampler: &dyn ZSampler, draws: usize, root: &RngStream) -> Result<Vec<f64>> {
    run_batches(root, draws, |rng| sampler.sample(rng))
}

pub fn interarrival_draws(sampler: &dyn InterarrivalSampler, draws: usize, root: &RngStream) -> Result<Vec<f64>> {
    run_batches(root, draws, |rng| sampler.sample(rng))
}

/// Counts N^L(t) of `draws` independent Laskin draws. Each batch splits its
/// stream into separate Z and Poisson streams.
pub fn laskin_counts(sampler: &dyn ZSampler, t: f64, draws: usize, root: &RngStream) -> Result<Vec<u64>> {
    let batches = draws.div_ceil(BATCH_SIZE);
    let out: Vec<Vec<u64>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut streams = LaskinStreams::new(&root.child(b as u64));
            let n = BATCH_SIZE.min(draws - b * BATCH_SIZE);
            (0..n).map(|_| simulate_laskin(sampler, t, &mut streams)).collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(out.into_iter().flatten().collect())
}

/// Renewal counts N(tᵢ) for each trajectory, at each of `times`.
pub fn renewal_counts(
    sampler: &dyn InterarrivalSampler,
    times: &[f64],
    draws: usize,
    max_draws: usize,
    root: &RngStream,
) -> Result<Vec<Vec<usize>>> {
    let horizon = times.iter().copied().fold(f64::NAN, f64::max);
    if !(horizon > 0.0) {
        return Err(param("need at least one positive time"));
    }
    run_batches(root, draws, |rng| {
        let path = simulate_renewal(sampler, horizon, max_draws, rng)?;
        times.iter().map(|&t| path.count(t)).collect()
    })
}

pub fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Two-sample Kolmogorov-Smirnov statistic sup|F₁ − F₂|.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len()) as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Empirical pmf of nonnegative counts on 0..=n_max with per-bin standard
/// errors sqrt(p(1−p)/n).
pub fn empirical_pmf(counts: impl IntoIterator<Item = usize>, n_max: usize) -> (Vec<f64>, Vec<f64>) {
    let mut hist = vec![0usize; n_max + 1];
    let mut total = 0usize;
    for c in counts {
        total += 1;
        if c <= n_max {
            hist[c] += 1;
        }
    }
    let n = total as f64;
    let p: Vec<f64> = hist.iter().map(|&h| h as f64 / n).collect();
    let se = p.iter().map(|&q| (q * (1.0 - q) / n).sqrt()).collect();
    (p, se)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinComparison {
    pub n: usize,
    pub empirical: f64,
    pub exact: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    pub bins: Vec<BinComparison>,
    /// max over n ≤ 10 of |empirical − exact|.
    pub max_abs: f64,
    /// max over bins of |empirical − exact| / standard error.
    pub max_z: f64,
}

impl Discrepancy {
    pub fn beyond_noise(&self, z: f64) -> bool {
        self.max_z > z
    }
}

/// Empirical pmf of the renewal count N(t) against the Laskin pmf, bins 0..=10.
pub fn renewal_vs_laskin_discrepancy(
    sampler: &dyn InterarrivalSampler,
    t: f64,
    draws: usize,
    root: &RngStream,
) -> Result<Discrepancy> {
    const BINS: usize = 10;
    let pmf = LaskinPmf::new(*sampler.model())?.table(t, BINS)?;
    let counts = renewal_counts(sampler, &[t], draws, super::process::DEFAULT_DRAW_BUDGET, root)?;
    let (emp, _) = empirical_pmf(counts.iter().map(|c| c[0]), BINS);
    let n = draws as f64;
    let bins: Vec<BinComparison> = (0..=BINS)
        .map(|k| {
            let exact = pmf.probs[k];
            BinComparison { n: k, empirical: emp[k], exact, std_error: (exact * (1.0 - exact) / n).sqrt() }
        })
        .collect();
    let max_abs = bins.iter().map(|b| (b.empirical - b.exact).abs()).fold(0.0, f64::max);
    let max_z = bins
        .iter()
        .filter(|b| b.std_error > 0.0)
        .map(|b| (b.empirical - b.exact).abs() / b.std_error)
        .fold(0.0, f64::max);
    Ok(Discrepancy { bins, max_abs, max_z })
}
