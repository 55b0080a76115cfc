//! Sharpness: loudness-weighted spectral centroid of specific loudness.

use crate::error::{invalid, Result};
use crate::filterbank::ChannelGrid;
use crate::loudness::LoudnessResult;
use crate::series::MetricSeries;
use crate::Variant;

#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessParams {
    pub q_s: f64,
    /// Cubic weighting in ERB-number, highest power first.
    pub weight_poly: [f64; 4],
}

impl SharpnessParams {
    pub fn for_variant(variant: Variant) -> Self {
        let q_s = match variant {
            Variant::Gammatone => 2.29e-3,
            Variant::Gammachirp => 2.23e-3,
        };
        SharpnessParams { q_s, weight_poly: [1.19e-3, -4.90e-2, 0.717, -2.01] }
    }

    pub fn weight(&self, cam: f64) -> f64 {
        self.weight_poly.iter().fold(0.0, |acc, c| acc * cam + c)
    }

    pub fn weights(&self, grid: &ChannelGrid) -> Vec<f64> {
        grid.cams().map(|z| self.weight(z)).collect()
    }
}

/// Sharpness of one frame. `None` when the frame is silent.
pub fn sharpness_frame(specific: &[f64], total: f64, cams: &[f64], weights: &[f64], q_s: f64) -> Option<f64> {
    let sum: f64 = specific.iter().sum();
    if !(sum > 0.0 && total > 0.0) {
        return None;
    }
    let log_term = ((total + 20.0) / 20.0).ln();
    let num: f64 = specific
        .iter()
        .zip(cams)
        .zip(weights)
        .map(|((&n, &z), &w)| {
            let q = w * sum / (z * log_term);
            q * n * z
        })
        .sum();
    Some(q_s * num / sum)
}

/// Sharpness S(t) in acum over a loudness result.
pub fn sharpness(loudness: &LoudnessResult, params: &SharpnessParams) -> Result<MetricSeries> {
    let bank = loudness.specific();
    let cams: Vec<f64> = bank.grid().cams().collect();
    if cams.iter().any(|&z| z <= 0.0) {
        return Err(invalid("ERB-number grid must be positive"));
    }
    let weights = params.weights(bank.grid());
    let mut frame = vec![0.0; bank.num_channels()];
    let values = (0..bank.num_samples())
        .map(|t| {
            for (k, v) in frame.iter_mut().enumerate() {
                *v = bank.channel(k)[t];
            }
            sharpness_frame(&frame, loudness.total()[t], &cams, &weights, params.q_s).unwrap_or(f64::NAN)
        })
        .collect();
    MetricSeries::new(values, bank.sample_rate(), loudness.window(), "sharpness")
}
