//! Reference forward pass of a Squeeze-and-Excitation block.
//!
//! `squeeze` global-average-pools each channel, `excite` maps the pooled
//! vector through `FC(C -> C/r) -> ReLU -> FC(C/r -> C) -> sigmoid`, and
//! `se_forward` rescales every channel by its excitation weight.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Reduction ratio used when none is configured.
pub const DEFAULT_REDUCTION_RATIO: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("feature map dimensions must be at least 1")]
    EmptyDimension,
    #[error("channel count {channels} is not divisible by reduction ratio {ratio}")]
    IndivisibleChannels { channels: usize, ratio: usize },
    #[error("value is not finite")]
    NonFinite,
}

/// Channel-major `C x H x W` tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    channels: usize,
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl FeatureMap {
    pub fn new(
        channels: usize,
        height: usize,
        width: usize,
        values: Vec<f64>,
    ) -> Result<Self, SeError> {
        if channels == 0 || height == 0 || width == 0 {
            return Err(SeError::EmptyDimension);
        }
        if values.len() != channels * height * width {
            return Err(SeError::DimensionMismatch("values length != C * H * W"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SeError::NonFinite);
        }
        Ok(Self {
            channels,
            height,
            width,
            values,
        })
    }

    pub fn zeros(channels: usize, height: usize, width: usize) -> Result<Self, SeError> {
        Self::new(channels, height, width, vec![0.0; channels * height * width])
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, c: usize, i: usize, j: usize) -> f64 {
        self.values[(c * self.height + i) * self.width + j]
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        let plane = self.height * self.width;
        &self.values[c * plane..(c + 1) * plane]
    }
}

/// Excitation parameters. Matrices are row-major: `w1` is `(C/r) x C`,
/// `w2` is `C x (C/r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeWeights {
    channels: usize,
    reduction_ratio: usize,
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: Vec<f64>,
}

impl SeWeights {
    pub fn new(
        channels: usize,
        reduction_ratio: usize,
        w1: Vec<f64>,
        b1: Vec<f64>,
        w2: Vec<f64>,
        b2: Vec<f64>,
    ) -> Result<Self, SeError> {
        let hidden = hidden_width(channels, reduction_ratio)?;
        if w1.len() != hidden * channels {
            return Err(SeError::DimensionMismatch("w1 must be (C/r) x C"));
        }
        if b1.len() != hidden {
            return Err(SeError::DimensionMismatch("b1 must have C/r entries"));
        }
        if w2.len() != channels * hidden {
            return Err(SeError::DimensionMismatch("w2 must be C x (C/r)"));
        }
        if b2.len() != channels {
            return Err(SeError::DimensionMismatch("b2 must have C entries"));
        }
        if [&w1, &b1, &w2, &b2]
            .iter()
            .any(|v| v.iter().any(|x| !x.is_finite()))
        {
            return Err(SeError::NonFinite);
        }
        Ok(Self {
            channels,
            reduction_ratio,
            w1,
            b1,
            w2,
            b2,
        })
    }

    pub fn zeros(channels: usize, reduction_ratio: usize) -> Result<Self, SeError> {
        let hidden = hidden_width(channels, reduction_ratio)?;
        Self::new(
            channels,
            reduction_ratio,
            vec![0.0; hidden * channels],
            vec![0.0; hidden],
            vec![0.0; channels * hidden],
            vec![0.0; channels],
        )
    }

    /// Reproducible weights drawn uniformly from `±1/sqrt(fan_in)` with a
    /// ChaCha8 stream seeded by `seed`.
    pub fn seeded(channels: usize, reduction_ratio: usize, seed: u64) -> Result<Self, SeError> {
        let hidden = hidden_width(channels, reduction_ratio)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |n: usize, fan_in: usize| -> Vec<f64> {
            let bound = 1.0 / libm::sqrt(fan_in as f64);
            (0..n).map(|_| rng.random_range(-bound..bound)).collect()
        };
        let w1 = draw(hidden * channels, channels);
        let b1 = draw(hidden, channels);
        let w2 = draw(channels * hidden, hidden);
        let b2 = draw(channels, hidden);
        Self::new(channels, reduction_ratio, w1, b1, w2, b2)
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn reduction_ratio(&self) -> usize {
        self.reduction_ratio
    }

    pub fn hidden(&self) -> usize {
        self.channels / self.reduction_ratio
    }

    pub fn w1(&self) -> &[f64] {
        &self.w1
    }

    pub fn b1(&self) -> &[f64] {
        &self.b1
    }

    pub fn w2(&self) -> &[f64] {
        &self.w2
    }

    pub fn b2(&self) -> &[f64] {
        &self.b2
    }
}

fn hidden_width(channels: usize, ratio: usize) -> Result<usize, SeError> {
    if channels == 0 || ratio == 0 {
        return Err(SeError::EmptyDimension);
    }
    if !channels.is_multiple_of(ratio) {
        return Err(SeError::IndivisibleChannels { channels, ratio });
    }
    Ok(channels / ratio)
}

// Fixed-shape pairwise summation: split at the midpoint down to blocks of 8.
fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

/// Per-channel spatial mean.
pub fn squeeze(fm: &FeatureMap) -> Vec<f64> {
    let plane = (fm.height * fm.width) as f64;
    (0..fm.channels)
        .map(|c| pairwise_sum(fm.channel(c)) / plane)
        .collect()
}

/// Channel scales `sigmoid(w2 · relu(w1 · z + b1) + b2)`.
pub fn excite(z: &[f64], w: &SeWeights) -> Result<Vec<f64>, SeError> {
    if z.len() != w.channels {
        return Err(SeError::DimensionMismatch("squeezed vector length != C"));
    }
    let hidden: Vec<f64> = w
        .w1
        .chunks_exact(w.channels)
        .zip(&w.b1)
        .map(|(row, b)| {
            let a = row.iter().zip(z).map(|(x, y)| x * y).sum::<f64>() + b;
            a.max(0.0)
        })
        .collect();
    Ok(w
        .w2
        .chunks_exact(w.hidden())
        .zip(&w.b2)
        .map(|(row, b)| sigmoid(row.iter().zip(&hidden).map(|(x, y)| x * y).sum::<f64>() + b))
        .collect())
}

pub fn se_forward(fm: &FeatureMap, w: &SeWeights) -> Result<FeatureMap, SeError> {
    if fm.channels != w.channels {
        return Err(SeError::DimensionMismatch("feature map channels != weight channels"));
    }
    let scales = excite(&squeeze(fm), w)?;
    let plane = fm.height * fm.width;
    let values = fm
        .values
        .chunks_exact(plane)
        .zip(&scales)
        .flat_map(|(chan, s)| chan.iter().map(move |v| v * s))
        .collect();
    Ok(FeatureMap {
        channels: fm.channels,
        height: fm.height,
        width: fm.width,
        values,
    })
}
