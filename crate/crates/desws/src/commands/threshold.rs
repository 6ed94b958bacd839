use desws_core::{analyze_thresholds, TestMethod, ThresholdSample};
use serde::Serialize;

use super::to_json;
use crate::ingestion::{parse_threshold_samples, write_threshold_samples, PipelineConfig};
use crate::{fmt_g, input, CliError, Format};

/// Flag overrides; `None` falls back to the configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct ThresholdOptions {
    pub alpha: Option<f64>,
    pub method: Option<TestMethod>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub method: TestMethod,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub significant: bool,
    pub selected_threshold_m: f64,
    /// Always true: the threshold is taken from the configuration, the test
    /// only reports whether the two columns differ.
    pub selection_is_configured: bool,
    pub samples: usize,
}

/// Returns the report and the plot series (the samples as CSV, sorted by
/// threshold).
pub fn cmd_threshold_test(
    config: &PipelineConfig,
    samples_csv: &str,
    opts: ThresholdOptions,
    format: Format,
) -> Result<(String, ThresholdReport, String), CliError> {
    let samples = parse_threshold_samples(samples_csv).map_err(input)?;
    let method = opts.method.unwrap_or(config.test_method);
    let alpha = opts.alpha.unwrap_or(config.alpha);
    let a = analyze_thresholds(&samples, alpha, method, config.danger_threshold_m).map_err(input)?;
    let report = ThresholdReport {
        method,
        statistic: a.test.statistic,
        p_value: a.test.p_value,
        alpha: a.alpha,
        significant: a.significant,
        selected_threshold_m: a.selected_threshold_m,
        selection_is_configured: a.selection_is_configured,
        samples: a.sample_count,
    };
    let text = match format {
        Format::Json => to_json(&report)?,
        Format::Text => format!(
            "method {}\nstatistic {}\np_value {}\nalpha {}\nsignificant {}\nselected_threshold_m {}\nsamples {}\n",
            method.name(),
            fmt_g(report.statistic),
            fmt_g(report.p_value),
            fmt_g(report.alpha),
            report.significant,
            fmt_g(report.selected_threshold_m),
            report.samples
        ),
    };
    let mut sorted: Vec<ThresholdSample> = samples;
    sorted.sort_by(|a, b| a.threshold_m.total_cmp(&b.threshold_m));
    Ok((text, report, write_threshold_samples(&sorted)))
}
