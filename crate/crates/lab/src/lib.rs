//! Config-driven experiment harness on top of `meyers-core`.
//!
//! A run reads a flat `key = value` config, evaluates its cells, writes one
//! CSV and a summary of verdicts. Verdicts are computed from the CSV rows
//! only, so `report` on a saved CSV reproduces them.

pub mod config;
pub mod experiments;
pub mod table;
pub mod verdict;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub use config::{Config, Experiment};
use meyers_core::Exec;
pub use table::Table;
pub use verdict::Verdict;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("config: {0}")]
    Config(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] meyers_core::Error),
}

/// A cell that failed; the rest of the sweep still ran.
#[derive(Clone, Debug, PartialEq)]
pub struct Aborted {
    pub cell: String,
    pub error: String,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub table: Table,
    pub verdicts: Vec<Verdict>,
    pub aborted: Vec<Aborted>,
}

impl RunOutput {
    pub fn all_pass(&self) -> bool {
        self.aborted.is_empty() && !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn summary(&self) -> String {
        summary(self.table.experiment, &self.verdicts, &self.aborted)
    }
}

pub fn summary(experiment: Experiment, verdicts: &[Verdict], aborted: &[Aborted]) -> String {
    let mut out = format!("experiment {experiment}\n");
    for v in verdicts {
        let _ = writeln!(out, "{v}");
    }
    if verdicts.is_empty() {
        out.push_str("FAIL no verdicts: no rows to judge\n");
    }
    for a in aborted {
        let _ = writeln!(out, "ABORTED {}: {}", a.cell, a.error);
    }
    out
}

/// Runs the experiment of `cfg` and judges the rows it produced.
pub fn run(cfg: &Config, exec: Exec) -> Result<RunOutput, LabError> {
    let (table, aborted) = experiments::run(cfg, exec)?;
    cfg.finish()?;
    let verdicts = experiments::verdicts(&table)?;
    Ok(RunOutput {
        table,
        verdicts,
        aborted,
    })
}

/// CSV path of a config: its `output` key, else the config file with a
/// `.csv` extension.
pub fn output_path(cfg: &Config, config_path: &Path) -> PathBuf {
    cfg.output_path().unwrap_or_else(|| config_path.with_extension("csv"))
}

/// Summary file written next to the CSV.
pub fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("summary.txt")
}
