//! Batch driver for the `efsphere` library.
//!
//! Exit codes: 0 when every check passes, 1 when a check reports failure,
//! 2 for usage and I/O errors.

pub mod args;
pub mod cache;
pub mod commands;
pub mod config;
pub mod emit;

use std::ffi::OsString;

use clap::Parser;
use log::error;

use args::Cli;
use cache::Cache;
use config::RunConfig;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Library errors that mean a verified property did not hold, as opposed to
/// bad input.
fn is_check_failure(err: &anyhow::Error) -> bool {
    use efsphere::Error::*;
    err.chain().any(|e| {
        matches!(
            e.downcast_ref::<efsphere::Error>(),
            Some(InvariantViolated(_) | PerronMismatch { .. } | NoConvergence { .. } | Irregular { .. })
        )
    })
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let cfg = match RunConfig::resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_USAGE;
        }
    };
    let level = match cfg.verbosity {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .try_init();

    let cache = Cache::new(cfg.cache_dir.clone());
    let outcome = commands::execute(&cli.command, &cfg, &cache).and_then(|o| {
        let bytes = o.emission.render(cfg.format)?;
        emit::write_output(cli.out.as_deref(), &bytes)?;
        Ok(o.pass)
    });
    match outcome {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            error!("{e:#}");
            if is_check_failure(&e) {
                EXIT_FAIL
            } else {
                EXIT_USAGE
            }
        }
    }
}
