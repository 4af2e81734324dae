use ksrelax::kilbas_saigo::{KsFunction, KsParams, Route};
use ksrelax::num_complex::Complex64;
use ksrelax::relaxation::{
    series_residual, solve_first_order, solve_second_order, Equation, SecondOrderSpec, StretchedModel,
};
use ksrelax::stochastic::{
    interarrival_registry, laskin_counts, mean_and_std_error, moments_laskin_analytic, moments_laskin_mc,
    pmf_registry, renewal_counts, renewal_vs_laskin_discrepancy, run_batches, simulate_renewal, z_sampler_registry,
    PmfConfig, RngStream, RNG_ALGORITHM,
};
use ksrelax::transforms::{invert_laplace_with, inversion_max_arg, ContourSpec, GEta, InversionOptions, KsLaplace};
use ksrelax::{Error, Result};

use crate::config::{Command, ModelArgs, ProcessArg, RunConfig, SeedArgs, SolveOrder};
use crate::table::Table;

fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

fn model_of(m: &ModelArgs) -> Result<StretchedModel> {
    StretchedModel::new(m.alpha, m.gamma, m.lambda)
}

fn model_meta(t: &mut Table, m: &ModelArgs) {
    t.meta_f64("alpha", m.alpha);
    t.meta_f64("gamma", m.gamma);
    t.meta_f64("lambda", m.lambda);
}

fn seed_meta(t: &mut Table, s: &SeedArgs) {
    t.meta("seed", s.seed);
    t.meta("stream", s.stream);
    t.meta("rng", RNG_ALGORITHM);
}

fn check_draws(draws: usize) -> Result<()> {
    if draws == 0 {
        return Err(param("draws must be positive"));
    }
    Ok(())
}

fn header(cfg: &RunConfig, columns: &[&str]) -> Table {
    let mut t = Table::new(columns);
    t.meta("tool", "ksrelax");
    t.meta("version", env!("CARGO_PKG_VERSION"));
    t.meta("command", cfg.command.name());
    t
}

/// Runs one command and returns its result table. Nothing is written.
pub fn run(cfg: &RunConfig) -> Result<Table> {
    match &cfg.command {
        Command::KsEval { a, m, l, alpha, gamma, x, tol } => {
            let params = match (a, m, l, alpha, gamma) {
                (Some(a), Some(m), Some(l), None, None) => KsParams::new(*a, *m, *l)?,
                (None, None, None, Some(al), Some(g)) => KsParams::stretched(*al, *g)?,
                _ => return Err(param("give either --a, --m and --l, or --alpha and --gamma")),
            };
            let f = KsFunction::with_tolerance(params, *tol)?;
            let mut t = header(cfg, &["x", "value", "error", "route"]);
            t.meta_f64("a", params.a());
            t.meta_f64("m", params.m());
            t.meta_f64("l", params.l());
            t.meta_f64("tolerance", *tol);
            for &xi in &x.0 {
                let v = f.eval(xi)?;
                let route = match v.route {
                    Route::Series => "series",
                    Route::MellinBarnes => "mellin-barnes",
                };
                t.push(vec![xi.into(), v.value.into(), v.error.into(), route.into()]);
            }
            Ok(t)
        }
        Command::KsLaplace { model, nu, z, arg, c } => {
            let m = model_of(model)?;
            let nu = nu.unwrap_or(m.rho());
            let mut spec = ContourSpec::new(m.ks_params(), nu, m.lambda())?.with_max_arg(arg.abs())?;
            if let Some(c) = c {
                spec = spec.with_c(*c)?;
            }
            let lt = KsLaplace::new(spec)?;
            let mut t = header(cfg, &["r", "arg", "z_re", "z_im", "value_re", "value_im", "error"]);
            model_meta(&mut t, model);
            t.meta_f64("nu", nu);
            t.meta_f64("c", lt.contour().c);
            t.meta_f64("tolerance", ksrelax::transforms::LAPLACE_TOLERANCE);
            for &r in &z.0 {
                let zz = Complex64::from_polar(r, *arg);
                let (v, err) = lt.eval_with_error(zz)?;
                t.push(vec![r.into(), (*arg).into(), zz.re.into(), zz.im.into(), v.re.into(), v.im.into(), err.into()]);
            }
            Ok(t)
        }
        Command::Solve { order, alpha, gamma, kappa, a, b, f0, df0, t: grid, nmax } => {
            let m = StretchedModel::new(*alpha, *gamma, 1.0)?;
            let (sol, eq, warnings) = match order {
                SolveOrder::First => {
                    let kappa = kappa.ok_or_else(|| param("first-order solve needs --kappa"))?;
                    (solve_first_order(&m, kappa, *f0, *nmax)?, Equation::FirstOrder { kappa }, Vec::new())
                }
                SolveOrder::Second => {
                    let (Some(a), Some(b)) = (a, b) else {
                        return Err(param("second-order solve needs --a and --b"));
                    };
                    let spec = SecondOrderSpec::new(m, *a, *b, *f0, *df0)?;
                    (solve_second_order(&spec, *nmax)?, Equation::SecondOrder { a: *a, b: *b }, spec.warnings.clone())
                }
            };
            let mut t = header(cfg, &["t", "f", "error", "residual"]);
            t.meta_f64("alpha", *alpha);
            t.meta_f64("gamma", *gamma);
            match eq {
                Equation::FirstOrder { kappa } => t.meta_f64("kappa", kappa),
                Equation::SecondOrder { a, b } => {
                    t.meta_f64("a", a);
                    t.meta_f64("b", b);
                    t.meta_f64("df0", *df0);
                }
            }
            t.meta_f64("f0", *f0);
            t.meta("nmax", nmax);
            t.meta_f64("validity_limit", sol.validity_limit());
            for w in warnings {
                t.meta("warning", w);
            }
            for &ti in &grid.0 {
                if ti > sol.validity_limit() {
                    return Err(Error::Domain(format!(
                        "t = {ti} beyond the series validity limit {}; residuals are not certified there",
                        sol.validity_limit()
                    )));
                }
                let (f, err) = sol.eval_with_error(ti)?;
                let r = series_residual(&sol, &eq, &[ti])?;
                t.push(vec![ti.into(), f.into(), err.into(), r.into()]);
            }
            Ok(t)
        }
        Command::Pmf { kind, model, t: time, nmax, a, b } => {
            let m = model_of(model)?;
            let k = pmf_registry().build(kind.name(), &PmfConfig { model: m, a: *a, b: *b })?;
            let tab = k.table(*time, *nmax)?;
            let mut t = header(cfg, &["n", "p"]);
            t.meta("kind", kind.name());
            model_meta(&mut t, model);
            if let (Some(a), Some(b)) = (a, b) {
                t.meta_f64("a", *a);
                t.meta_f64("b", *b);
            }
            t.meta_f64("t", *time);
            t.meta("nmax", nmax);
            t.meta_f64("truncation_mass", tab.truncation_mass);
            for (n, p) in tab.probs.iter().enumerate() {
                t.push(vec![n.into(), (*p).into()]);
            }
            Ok(t)
        }
        Command::Simulate { process, model, t: time, draws, seed, sampler, interarrival, max_draws } => {
            check_draws(*draws)?;
            let m = model_of(model)?;
            let root = RngStream::new(seed.seed, seed.stream);
            match process {
                ProcessArg::Renewal => {
                    let u = interarrival_registry().build(interarrival, &m)?;
                    let paths = run_batches(&root, *draws, |rng| simulate_renewal(u.as_ref(), *time, *max_draws, rng))?;
                    let mut t = header(cfg, &["trajectory", "index", "arrival"]);
                    t.meta("process", "renewal");
                    model_meta(&mut t, model);
                    t.meta_f64("horizon", *time);
                    t.meta("draws", draws);
                    t.meta("interarrival", interarrival);
                    seed_meta(&mut t, seed);
                    for (i, p) in paths.iter().enumerate() {
                        for (k, &a) in p.arrivals().iter().enumerate() {
                            t.push(vec![i.into(), (k + 1).into(), a.into()]);
                        }
                    }
                    Ok(t)
                }
                ProcessArg::Laskin => {
                    let z = z_sampler_registry().build(sampler, &m)?;
                    let counts = laskin_counts(z.as_ref(), *time, *draws, &root)?;
                    let mut t = header(cfg, &["draw", "count"]);
                    t.meta("process", "laskin");
                    model_meta(&mut t, model);
                    t.meta_f64("t", *time);
                    t.meta("draws", draws);
                    t.meta("sampler", sampler);
                    seed_meta(&mut t, seed);
                    for (i, c) in counts.into_iter().enumerate() {
                        t.push(vec![i.into(), c.into()]);
                    }
                    Ok(t)
                }
            }
        }
        Command::Moments { model, t: grid, draws, seed, sampler } => {
            check_draws(*draws)?;
            let m = model_of(model)?;
            let z = z_sampler_registry().build(sampler, &m)?;
            let root = RngStream::new(seed.seed, seed.stream);
            let mut t = header(
                cfg,
                &["t", "mean", "variance", "product_constant", "mc_mean", "mc_variance", "mc_std_error"],
            );
            model_meta(&mut t, model);
            t.meta("draws", draws);
            t.meta("sampler", sampler);
            seed_meta(&mut t, seed);
            for (i, &ti) in grid.0.iter().enumerate() {
                let exact = moments_laskin_analytic(&m, ti)?;
                let mc = moments_laskin_mc(z.as_ref(), ti, *draws, &root.child(i as u64))?;
                t.push(vec![
                    ti.into(),
                    exact.mean.into(),
                    exact.variance.into(),
                    exact.product_constant.into(),
                    mc.mean.into(),
                    mc.variance.into(),
                    mc.mc_std_error.unwrap_or(f64::NAN).into(),
                ]);
            }
            Ok(t)
        }
        Command::Compare { model, t: time, draws, seed, interarrival, z, .. } => {
            check_draws(*draws)?;
            let m = model_of(model)?;
            let u = interarrival_registry().build(interarrival, &m)?;
            let root = RngStream::new(seed.seed, seed.stream);
            let d = renewal_vs_laskin_discrepancy(u.as_ref(), *time, *draws, &root)?;
            let mut t = header(cfg, &["n", "empirical", "exact", "std_error", "z_score"]);
            model_meta(&mut t, model);
            t.meta_f64("t", *time);
            t.meta("draws", draws);
            t.meta("interarrival", interarrival);
            seed_meta(&mut t, seed);
            t.meta_f64("max_abs", d.max_abs);
            t.meta_f64("max_z", d.max_z);
            t.meta_f64("z_threshold", *z);
            t.meta("beyond_noise", d.beyond_noise(*z));
            for b in &d.bins {
                let zs = if b.std_error > 0.0 { (b.empirical - b.exact) / b.std_error } else { 0.0 };
                t.push(vec![b.n.into(), b.empirical.into(), b.exact.into(), b.std_error.into(), zs.into()]);
            }
            Ok(t)
        }
        Command::RenewalFn { model, t: grid, draws, seed, interarrival, max_draws } => {
            check_draws(*draws)?;
            let m = model_of(model)?;
            let g = GEta::with_max_arg(m, inversion_max_arg())?;
            let opts = InversionOptions::default();
            let u = interarrival_registry().build(interarrival, &m)?;
            let root = RngStream::new(seed.seed, seed.stream);
            let counts = renewal_counts(u.as_ref(), &grid.0, *draws, *max_draws, &root)?;
            let mut t = header(cfg, &["t", "inverted", "consistency", "mc_mean", "mc_std_error"]);
            model_meta(&mut t, model);
            t.meta("draws", draws);
            t.meta("interarrival", interarrival);
            t.meta("inversion_nodes", opts.nodes);
            seed_meta(&mut t, seed);
            for (i, &ti) in grid.0.iter().enumerate() {
                let inv = invert_laplace_with(|z| g.renewal_lt_complex(z), ti, &opts)?;
                let xs: Vec<f64> = counts.iter().map(|c| c[i] as f64).collect();
                let (mean, se) = mean_and_std_error(&xs);
                t.push(vec![ti.into(), inv.value.into(), inv.consistency.into(), mean.into(), se.into()]);
            }
            Ok(t)
        }
    }
}

/// Status for `compare --assert`: `Err` describes the failed expectation.
pub fn compare_assertion(cfg: &RunConfig, table: &Table) -> std::result::Result<(), String> {
    let Command::Compare { model, assert_mode: true, .. } = &cfg.command else {
        return Ok(());
    };
    let beyond = table.get_meta("beyond_noise") == Some("true");
    let z0 = table.f64_column("z_score").map_err(|e| e.to_string())?;
    let thr = table.meta_number("z_threshold")?;
    if z0.first().is_some_and(|z| z.abs() > thr) {
        return Err("the n = 0 bin differs beyond noise, but both processes share the first waiting time".into());
    }
    match (model.gamma == 0.0, beyond) {
        (true, true) => Err("gamma = 0 but the renewal and Laskin pmfs differ beyond noise".into()),
        (false, false) => Err("no bin differs beyond noise; increase --draws to resolve the gap".into()),
        _ => Ok(()),
    }
}

