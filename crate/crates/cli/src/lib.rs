//! Figure data and parameter sweeps for the monitored damped oscillator.

pub mod config;
pub mod error;
pub mod runner;
pub mod table;

use std::path::{Path, PathBuf};

pub use config::{Format, RunConfig, SERIES_TERMS_ENV};
pub use error::CliError;
pub use table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Surface,
    Variance,
    Correlators,
}

/// Runs one subcommand for a loaded config.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<Table, CliError> {
    match command {
        Command::Surface => runner::run_density_surface(cfg),
        Command::Variance => runner::run_variance_curve(cfg),
        Command::Correlators => runner::dump_correlators(cfg),
    }
}

/// Where and how to write, with command-line values taking precedence
/// over the config's `[output]` table. `None` means standard output.
pub fn resolve_output(
    cfg: &RunConfig,
    out: Option<&Path>,
    format: Option<Format>,
) -> (Option<PathBuf>, Format) {
    let from_cfg = cfg.output.as_ref();
    let path = out
        .map(Path::to_path_buf)
        .or_else(|| from_cfg.and_then(|o| o.path.clone()));
    let format = format
        .or_else(|| from_cfg.and_then(|o| o.format))
        .unwrap_or(Format::Csv);
    (path, format)
}

/// Loads `config`, runs `command` on a pool of `threads` workers (0 picks
/// the default) and writes the table.
pub fn run(
    command: Command,
    config: &Path,
    out: Option<&Path>,
    format: Option<Format>,
    threads: usize,
) -> Result<(), CliError> {
    let cfg = RunConfig::load(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let table = pool.install(|| execute(command, &cfg))?;
    let (path, format) = resolve_output(&cfg, out, format);
    let bytes = table.to_bytes(format)?;
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(&bytes)?;
        }
    }
    Ok(())
}
