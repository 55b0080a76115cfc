//! Fluctuation strength in vacil from slow (around 4 Hz) envelope
//! fluctuations of specific loudness.

use crate::error::Result;
use crate::modulation::{correlation_factors, ModulationAnalysis, ModulationMetric};
use crate::Variant;

pub const DELTA_EXPONENT: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationParams {
    pub q_f: f64,
}

impl FluctuationParams {
    pub fn for_variant(variant: Variant) -> Self {
        let q_f = match variant {
            Variant::Gammatone => 30.2e-3,
            Variant::Gammachirp => 30.0e-3,
        };
        FluctuationParams { q_f }
    }
}

/// `F'_k = ΔL^0.6·i²` with the edge-dependent correlation factors.
pub fn specific_fluctuation(k: usize, delta_level: f64, pairs: &[f64]) -> f64 {
    let (below, above) = correlation_factors(k, pairs);
    delta_level.max(0.0).powf(DELTA_EXPONENT) * (below.unwrap_or(1.0) * above.unwrap_or(1.0)).powi(2)
}

/// Fluctuation strength from a modulation analysis run with fluctuation
/// settings.
pub fn fluctuation(analysis: ModulationAnalysis, params: &FluctuationParams) -> Result<ModulationMetric> {
    ModulationMetric::from_analysis(analysis, params.q_f, |_, dl, prod| dl.max(0.0).powf(DELTA_EXPONENT) * prod * prod)
}
