//! Library side of the `ksrelax` command-line tool: configuration, command
//! dispatch, result tables and their reader.

pub mod config;
pub mod convert;
mod run;
pub mod table;

use std::path::PathBuf;

pub use config::{Command, RunConfig, OUTPUT_DIR_ENV};
pub use run::{compare_assertion, run};
pub use table::{Cell, Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARAMETER: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_STATISTICAL: i32 = 4;

pub fn exit_code(e: &ksrelax::Error) -> i32 {
    match e {
        ksrelax::Error::Statistical(_) => EXIT_STATISTICAL,
        e if e.is_parameter_error() => EXIT_PARAMETER,
        _ => EXIT_NUMERIC,
    }
}

/// One-line JSON error record written to stderr.
pub fn error_record(kind: &str, message: &str, code: i32) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message, "exit_code": code } }).to_string()
}

/// Where the output goes: `--output`, else `$KSRELAX_OUTPUT_DIR/<command>.<ext>`,
/// else stdout (`None`).
pub fn output_path(cfg: &RunConfig, env_dir: Option<PathBuf>) -> Option<PathBuf> {
    cfg.output.clone().or_else(|| {
        env_dir.map(|d| d.join(format!("{}.{}", cfg.command.name(), cfg.format.extension())))
    })
}

/// Runs the command, writes the result and returns the process exit status.
/// On failure nothing is written and an error record goes to stderr.
pub fn execute(cfg: &RunConfig) -> i32 {
    let table = match run(cfg) {
        Ok(t) => t,
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("{}", error_record(e.kind(), &e.to_string(), code));
            return code;
        }
    };
    let text = table.render(cfg.format.into());
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    match output_path(cfg, env_dir) {
        Some(path) => {
            if let Err(e) = table::write_atomic(&path, &text) {
                eprintln!("{}", error_record("io", &format!("{}: {e}", path.display()), EXIT_PARAMETER));
                return EXIT_PARAMETER;
            }
        }
        None => print!("{text}"),
    }
    match compare_assertion(cfg, &table) {
        Ok(()) => EXIT_OK,
        Err(msg) => {
            eprintln!("{}", error_record("statistical", &msg, EXIT_STATISTICAL));
            EXIT_STATISTICAL
        }
    }
}
