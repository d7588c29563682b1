//! The `frt` command-line harness: generate traces, simulate flooding
//! sweeps, analyze delay tables and compare datasets.
//!
//! Every command writes its outputs through an [`output::OutputSet`] and
//! finishes with a [`output::RunManifest`]; on error nothing is left behind.

pub mod analyze;
pub mod args;
pub mod compare;
pub mod generate;
pub mod output;
pub mod simulate;
pub mod tables;

use anyhow::Result;

use args::{Cli, Command};

/// A bad flag value discovered after argument parsing. Exits with status 2
/// like a parse error.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub fn run(cli: &Cli) -> Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.global.workers {
        if w == 0 {
            return Err(UsageError("--workers must be at least 1".into()).into());
        }
        pool = pool.num_threads(w);
    }
    let pool = pool.build()?;
    pool.install(|| match &cli.command {
        Command::Generate(a) => generate::run(a, &cli.global),
        Command::Simulate(a) => simulate::run(a, &cli.global),
        Command::Analyze(a) => analyze::run(a, &cli.global),
        Command::Compare(a) => compare::run(a),
    })
}
