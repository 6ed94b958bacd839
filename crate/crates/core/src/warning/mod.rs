//! Safe/dangerous verdicts and the nonparametric threshold analysis.

mod rank;
mod special;

use alloc::vec::Vec;

use thiserror::Error;

pub use rank::{kruskal_wallis, mann_whitney_u, u_statistics, MannWhitneyMode, EXACT_MAX_COMBINED};

/// Danger threshold used when no other value is configured.
pub const DEFAULT_THRESHOLD_M: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum WarningError {
    #[error("{0} must be strictly positive and finite")]
    NonPositiveInput(&'static str),
    #[error("a sample group is empty")]
    EmptyGroup,
    #[error("exact enumeration supports at most {max} pooled observations, got {combined}")]
    ExactTooLarge { combined: usize, max: usize },
    #[error("at least two groups are required")]
    FewerThanTwoGroups,
    #[error("at least two threshold samples are required")]
    FewerThanTwoObservations,
    #[error("significance level {0} is outside (0, 1)")]
    InvalidAlpha(f64),
    #[error("threshold {0} appears more than once")]
    DuplicateThreshold(f64),
    #[error("sample value is not finite")]
    NonFiniteValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Verdict {
    Safe,
    Dangerous,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SafetyVerdict {
    pub verdict: Verdict,
    pub distance_m: f64,
    pub threshold_m: f64,
}

/// Safe iff strictly farther than the threshold; a distance equal to the
/// threshold is Dangerous.
pub fn classify(distance_m: f64, threshold_m: f64) -> Result<SafetyVerdict, WarningError> {
    if !(distance_m > 0.0 && distance_m.is_finite()) {
        return Err(WarningError::NonPositiveInput("distance_m"));
    }
    if !(threshold_m > 0.0 && threshold_m.is_finite()) {
        return Err(WarningError::NonPositiveInput("threshold_m"));
    }
    let verdict = if distance_m > threshold_m {
        Verdict::Safe
    } else {
        Verdict::Dangerous
    };
    Ok(SafetyVerdict {
        verdict,
        distance_m,
        threshold_m,
    })
}

/// One row of threshold data: how many observations fell on each side at a
/// candidate threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ThresholdSample {
    pub threshold_m: f64,
    pub dangerous_count: u64,
    pub safe_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum TestMethod {
    #[default]
    MannWhitneyExact,
    MannWhitneyNormalApprox,
    KruskalWallis,
}

impl TestMethod {
    pub fn name(&self) -> &'static str {
        match self {
            TestMethod::MannWhitneyExact => "mann-whitney-exact",
            TestMethod::MannWhitneyNormalApprox => "mann-whitney-normal-approx",
            TestMethod::KruskalWallis => "kruskal-wallis",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TestResult {
    pub statistic: f64,
    /// Two-sided, in `(0, 1]`.
    pub p_value: f64,
    pub method: TestMethod,
}

/// Outcome of testing the dangerous-count series against the safe-count
/// series.
///
/// `selected_threshold_m` is the operator-configured threshold echoed back;
/// the test result is the evidence shown next to it and does not pick the
/// value.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ThresholdAnalysis {
    pub test: TestResult,
    pub alpha: f64,
    /// `p <= alpha`.
    pub significant: bool,
    pub selected_threshold_m: f64,
    pub selection_is_configured: bool,
    pub sample_count: usize,
}

pub fn analyze_thresholds(
    samples: &[ThresholdSample],
    alpha: f64,
    method: TestMethod,
    configured_threshold_m: f64,
) -> Result<ThresholdAnalysis, WarningError> {
    if samples.len() < 2 {
        return Err(WarningError::FewerThanTwoObservations);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(WarningError::InvalidAlpha(alpha));
    }
    if !(configured_threshold_m > 0.0 && configured_threshold_m.is_finite()) {
        return Err(WarningError::NonPositiveInput("configured_threshold_m"));
    }
    for (i, s) in samples.iter().enumerate() {
        if !s.threshold_m.is_finite() {
            return Err(WarningError::NonFiniteValue);
        }
        if samples[..i].iter().any(|p| p.threshold_m == s.threshold_m) {
            return Err(WarningError::DuplicateThreshold(s.threshold_m));
        }
    }
    let dangerous: Vec<f64> = samples.iter().map(|s| s.dangerous_count as f64).collect();
    let safe: Vec<f64> = samples.iter().map(|s| s.safe_count as f64).collect();
    let test = match method {
        TestMethod::MannWhitneyExact => mann_whitney_u(&dangerous, &safe, MannWhitneyMode::Exact)?,
        TestMethod::MannWhitneyNormalApprox => {
            mann_whitney_u(&dangerous, &safe, MannWhitneyMode::NormalApprox)?
        }
        TestMethod::KruskalWallis => kruskal_wallis(&[&dangerous[..], &safe[..]])?,
    };
    Ok(ThresholdAnalysis {
        test,
        alpha,
        significant: test.p_value <= alpha,
        selected_threshold_m: configured_threshold_m,
        selection_is_configured: true,
        sample_count: samples.len(),
    })
}
