//! Subcommand implementations. Each takes already-read inputs and returns
//! the rendered report, so the binary only handles files and exit codes.

mod diou;
mod estimate;
mod eval;
mod simulate;
mod threshold;

use std::path::Path;

use anyhow::Context as _;
use serde::Serialize;

pub use diou::cmd_diou;
pub use estimate::{cmd_estimate, cmd_warn, DetectionEntry, RunReport, SkippedEntry, Summary};
pub use eval::{cmd_eval, load_ground_truth, EvalInput};
pub use simulate::{cmd_simulate, SimulateOutput, TRUTH_HEADER};
pub use threshold::{cmd_threshold_test, ThresholdOptions, ThresholdReport};

use crate::ingestion::{parse_config, PipelineConfig};
use crate::{input, internal, CliError};

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(CliError::Input)
}

/// The configuration at `path`, or the defaults when no file is given.
pub fn load_config(path: Option<&Path>) -> Result<PipelineConfig, CliError> {
    match path {
        None => Ok(PipelineConfig::default()),
        Some(p) => parse_config(&read_text(p)?)
            .with_context(|| format!("in {}", p.display()))
            .map_err(CliError::Input),
    }
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(internal)?;
    s.push('\n');
    Ok(s)
}

pub(crate) fn bad_input(msg: impl std::fmt::Display) -> CliError {
    input(anyhow::anyhow!("{msg}"))
}
