use std::path::PathBuf;
use std::process::{Command, Output};

use ksrelax::stochastic::pmf_laskin;
use ksrelax::relaxation::StretchedModel;
use ksrelax_cli::{convert, Table};

fn ksrelax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksrelax"))
        .args(args)
        .env_remove(ksrelax_cli::OUTPUT_DIR_ENV)
        .output()
        .expect("binary runs")
}

fn table(args: &[&str]) -> Table {
    let out = ksrelax(args);
    assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    Table::parse(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("ksrelax-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn pmf_table_has_nmax_plus_one_rows() {
    let t = table(&["pmf", "laskin", "--alpha", "0.7", "--gamma", "0.1", "--t", "1"]);
    let p = convert::pmf_table(&t).unwrap();
    assert_eq!(p.probs.len(), 31);
    assert!((p.total() + p.truncation_mass - 1.0).abs() < 1e-9);
    let lib = pmf_laskin(&StretchedModel::new(0.7, 0.1, 1.0).unwrap(), 1.0, 30).unwrap();
    for (a, b) in p.probs.iter().zip(&lib.probs) {
        assert_eq!(a, b, "printed values must round-trip exactly");
    }
}

#[test]
fn laskin_at_time_zero_counts_nothing() {
    let t = table(&["simulate", "laskin", "--alpha", "0.7", "--gamma", "0.1", "--t", "0", "--draws", "50", "--seed", "9"]);
    let c = convert::laskin_counts(&t).unwrap();
    assert_eq!(c.len(), 50);
    assert!(c.iter().all(|&n| n == 0));
}

#[test]
fn second_order_solve_reports_small_residuals() {
    let t = table(&["solve", "second", "--alpha", "0.9", "--gamma", "0", "--a", "3", "--b", "2", "--t", "0:2:9"]);
    let r = t.f64_column("residual").unwrap();
    assert_eq!(r.len(), 9);
    assert!(r.iter().all(|x| x.abs() < 1e-8), "{r:?}");
    assert_eq!(t.f64_column("f").unwrap()[0], 1.0);
}

#[test]
fn solve_refuses_times_beyond_validity() {
    // out-of-range input, so a parameter-class failure
    let out = ksrelax(&["solve", "first", "--alpha", "0.5", "--gamma", "0", "--kappa", "1", "--t", "1e6", "--nmax", "20"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn stochastic_output_is_deterministic() {
    let args = ["simulate", "renewal", "--alpha", "0.6", "--gamma", "0.2", "--t", "3", "--draws", "300", "--seed", "17"];
    let a = ksrelax(&args);
    let b = ksrelax(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let other = ksrelax(&[&args[..], &["--stream", "1"]].concat());
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn renewal_trajectories_round_trip() {
    let t = table(&["simulate", "renewal", "--alpha", "0.6", "--gamma", "0.2", "--t", "3", "--draws", "200", "--seed", "4"]);
    let paths = convert::trajectories(&t).unwrap();
    assert_eq!(paths.len(), 200);
    for p in &paths {
        assert_eq!(p.horizon(), 3.0);
        assert!(p.arrivals().iter().all(|&a| a > 0.0 && a <= 3.0));
    }
}

#[test]
fn csv_and_json_carry_the_same_table() {
    let base = ["ks-eval", "--alpha", "0.5", "--gamma", "0.3", "--x=-20,-2,0,1.5"];
    let csv = table(&base);
    let json = table(&[&base[..], &["--format", "json"]].concat());
    assert_eq!(csv, json);
    let vals = convert::ks_values(&csv).unwrap();
    assert_eq!(vals.len(), 4);
    assert_eq!(vals[2].1.value, 1.0);
    assert_eq!(Table::parse(&csv.to_json()).unwrap(), csv);
    assert_eq!(Table::parse(&json.to_csv()).unwrap(), csv);
}

#[test]
fn output_routing() {
    let dir = scratch_dir("routing");
    let explicit = dir.join("explicit.csv");
    let out = ksrelax(&["pmf", "laskin", "--alpha", "0.7", "--gamma", "0", "--t", "1", "-o", explicit.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(Table::parse(&std::fs::read_to_string(&explicit).unwrap()).is_ok());

    let out = Command::new(env!("CARGO_BIN_EXE_ksrelax"))
        .args(["pmf", "laskin", "--alpha", "0.7", "--gamma", "0", "--t", "1", "--format", "json"])
        .env(ksrelax_cli::OUTPUT_DIR_ENV, &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.join("pmf.json").exists());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes_and_error_records() {
    let out = ksrelax(&["pmf", "laskin", "--alpha", "1.5", "--gamma", "0", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let rec: serde_json::Value = serde_json::from_slice(out.stderr.trim_ascii()).unwrap();
    assert_eq!(rec["error"]["exit_code"], 2);
    assert_eq!(rec["error"]["kind"], "parameter");

    let out = ksrelax(&["pmf", "hat", "--alpha", "0.7", "--gamma", "0.1", "--t", "1", "--a", "1", "--b", "10"]);
    assert_eq!(out.status.code(), Some(2));

    let out = ksrelax(&["simulate", "renewal", "--alpha", "0.7", "--gamma", "0", "--t", "1", "--seed", "1", "--sampler", "x", "--interarrival", "nope"]);
    assert_eq!(out.status.code(), Some(2));

    // missing seed is a usage error from the argument parser
    let out = ksrelax(&["simulate", "laskin", "--alpha", "0.7", "--gamma", "0", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compare_assert_flags_unexpected_agreement() {
    // a handful of draws cannot resolve a γ ≠ 0 gap
    let out = ksrelax(&["compare", "--alpha", "0.7", "--gamma", "0.3", "--t", "1", "--draws", "50", "--seed", "2", "--assert"]);
    assert_eq!(out.status.code(), Some(4));
    let out = ksrelax(&["compare", "--alpha", "0.7", "--gamma", "0", "--t", "1", "--draws", "2000", "--seed", "2", "--assert"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn moments_table_round_trips() {
    let t = table(&["moments", "--alpha", "0.7", "--gamma", "0.1", "--t", "0.5,2", "--draws", "4000", "--seed", "5"]);
    let rows = convert::moments(&t).unwrap();
    assert_eq!(rows.len(), 2);
    for (_, exact, mc) in rows {
        let se = mc.mc_std_error.unwrap();
        assert!((exact.mean - mc.mean).abs() < 5.0 * se);
    }
}

#[test]
fn grid_parsing() {
    use ksrelax_cli::config::{parse_grid, Grid};
    assert_eq!(parse_grid("0:1:3").unwrap(), Grid(vec![0.0, 0.5, 1.0]));
    assert_eq!(parse_grid("-1, 2").unwrap(), Grid(vec![-1.0, 2.0]));
    assert!(parse_grid("0:1:0").is_err());
    assert!(parse_grid("a").is_err());
}
