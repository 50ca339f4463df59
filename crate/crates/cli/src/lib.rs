//! The `opk` command-line tool: argument handling, dispatch to opk-core,
//! result documents and the operad cache.

pub mod cache;
mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;

pub use cache::{cache_key, cache_load, cache_store, CacheStatus};
pub use config::{Cli, RunConfig};
pub use error::CliError;
pub use output::{ArityResult, ResultDocument, Timings};

pub fn run(config: &RunConfig) -> Result<ResultDocument, CliError> {
    let start = Instant::now();
    let computed = commands::compute(config)?;
    Ok(ResultDocument {
        version: cache::TOOL_VERSION.to_string(),
        config: config.clone(),
        results: computed.results.into_iter().map(|(n, r)| (n.to_string(), r)).collect(),
        timings: Timings {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
            operad_ms: computed.operad_ms,
            compute_ms: computed.compute_ms,
            cache: computed.cache,
        },
    })
}

/// Parses arguments, runs, writes the document and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match RunConfig::from_cli(&cli).and_then(|c| write(&c, &run(&c)?)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

fn write(config: &RunConfig, doc: &ResultDocument) -> Result<(), CliError> {
    let text = doc.render(config.format)?;
    match &config.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
