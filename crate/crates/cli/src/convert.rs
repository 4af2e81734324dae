//! Reading result tables back into library types.

use ksrelax::kilbas_saigo::{Certified, Route};
use ksrelax::relaxation::StretchedModel;
use ksrelax::stochastic::{BinComparison, Discrepancy, MomentSummary, PmfTable, RenewalTrajectory};

use crate::table::Table;

pub type ConvertResult<T> = std::result::Result<T, String>;

fn model(t: &Table) -> ConvertResult<StretchedModel> {
    StretchedModel::new(t.meta_number("alpha")?, t.meta_number("gamma")?, t.meta_number("lambda")?).map_err(|e| e.to_string())
}

fn expect_command(t: &Table, name: &str) -> ConvertResult<()> {
    match t.get_meta("command") {
        Some(c) if c == name => Ok(()),
        other => Err(format!("expected a '{name}' table, got {other:?}")),
    }
}

/// `ks-eval` rows as (x, certified value).
pub fn ks_values(t: &Table) -> ConvertResult<Vec<(f64, Certified<f64>)>> {
    expect_command(t, "ks-eval")?;
    let x = t.f64_column("x")?;
    let v = t.f64_column("value")?;
    let e = t.f64_column("error")?;
    let r = t.text_column("route")?;
    (0..x.len())
        .map(|i| {
            let route = match r[i].as_str() {
                "series" => Route::Series,
                "mellin-barnes" => Route::MellinBarnes,
                other => return Err(format!("unknown route '{other}'")),
            };
            Ok((x[i], Certified { value: v[i], error: e[i], route, terms: 0 }))
        })
        .collect()
}

pub fn pmf_table(t: &Table) -> ConvertResult<PmfTable> {
    expect_command(t, "pmf")?;
    let n = t.int_column("n")?;
    if n.iter().enumerate().any(|(i, &k)| k != i as i64) {
        return Err("pmf rows must be n = 0, 1, 2, …".into());
    }
    Ok(PmfTable {
        model: model(t)?,
        t: t.meta_number("t")?,
        probs: t.f64_column("p")?,
        truncation_mass: t.meta_number("truncation_mass")?,
    })
}

pub fn trajectories(t: &Table) -> ConvertResult<Vec<RenewalTrajectory>> {
    expect_command(t, "simulate")?;
    if t.get_meta("process") != Some("renewal") {
        return Err("not a renewal simulation".into());
    }
    let m = model(t)?;
    let horizon = t.meta_number("horizon")?;
    let draws: usize = t.get_meta("draws").ok_or("no draw count")?.parse().map_err(|_| "bad draw count")?;
    let traj = t.int_column("trajectory")?;
    let arr = t.f64_column("arrival")?;
    let mut paths = vec![Vec::new(); draws];
    for (i, a) in traj.into_iter().zip(arr) {
        paths.get_mut(i as usize).ok_or("trajectory index out of range")?.push(a);
    }
    paths.into_iter().map(|a| RenewalTrajectory::new(m, a, horizon).map_err(|e| e.to_string())).collect()
}

pub fn laskin_counts(t: &Table) -> ConvertResult<Vec<u64>> {
    expect_command(t, "simulate")?;
    if t.get_meta("process") != Some("laskin") {
        return Err("not a Laskin simulation".into());
    }
    t.int_column("count")?.into_iter().map(|c| u64::try_from(c).map_err(|e| e.to_string())).collect()
}

/// `moments` rows as (t, analytic summary, Monte Carlo summary).
pub fn moments(t: &Table) -> ConvertResult<Vec<(f64, MomentSummary, MomentSummary)>> {
    expect_command(t, "moments")?;
    let col = |n: &str| t.f64_column(n);
    let (ts, mean, var, a) = (col("t")?, col("mean")?, col("variance")?, col("product_constant")?);
    let (mm, mv, se) = (col("mc_mean")?, col("mc_variance")?, col("mc_std_error")?);
    Ok((0..ts.len())
        .map(|i| {
            (
                ts[i],
                MomentSummary { mean: mean[i], variance: var[i], product_constant: a[i], mc_std_error: None },
                MomentSummary { mean: mm[i], variance: mv[i], product_constant: a[i], mc_std_error: Some(se[i]) },
            )
        })
        .collect())
}

pub fn discrepancy(t: &Table) -> ConvertResult<Discrepancy> {
    expect_command(t, "compare")?;
    let n = t.int_column("n")?;
    let (e, x, s) = (t.f64_column("empirical")?, t.f64_column("exact")?, t.f64_column("std_error")?);
    let bins = (0..n.len())
        .map(|i| BinComparison { n: n[i] as usize, empirical: e[i], exact: x[i], std_error: s[i] })
        .collect();
    Ok(Discrepancy { bins, max_abs: t.meta_number("max_abs")?, max_z: t.meta_number("max_z")? })
}
