//! Roughness in asper from fast (around 70 Hz) envelope fluctuations of
//! specific loudness.

use std::path::Path;

use crate::error::{Error, Result};
use crate::filterbank::ChannelGrid;
use crate::modulation::{correlation_factors, ModulationAnalysis, ModulationMetric};
use crate::tables::{check_increasing, interp_clamped, parse_rows, read_rows};
use crate::Variant;

const BUNDLED_WEIGHTS: &str = include_str!("../data/roughness_weights.txt");

/// Channel weighting `w_R` as a function of ERB-number.
#[derive(Debug, Clone, PartialEq)]
pub struct RoughnessWeights {
    cams: Vec<f64>,
    weights: Vec<f64>,
}

impl RoughnessWeights {
    pub fn standard() -> Self {
        Self::parse(BUNDLED_WEIGHTS).expect("bundled roughness weights are well formed")
    }

    /// Parses `cam weight` rows.
    pub fn parse(text: &str) -> Result<Self> {
        let rows = parse_rows(text, 2)?;
        Self::from_rows(&rows)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_rows(&read_rows(path, 2)?)
    }

    fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        check_increasing(rows)?;
        if let Some(i) = rows.iter().position(|r| r[1] < 0.0) {
            return Err(Error::Table { line: i + 1, msg: "weights must be non-negative".into() });
        }
        Ok(RoughnessWeights {
            cams: rows.iter().map(|r| r[0]).collect(),
            weights: rows.iter().map(|r| r[1]).collect(),
        })
    }

    pub fn at(&self, cam: f64) -> f64 {
        interp_clamped(&self.cams, &self.weights, cam)
    }

    pub fn for_grid(&self, grid: &ChannelGrid) -> Vec<f64> {
        grid.cams().map(|z| self.at(z)).collect()
    }

    /// Multiplies every weight by `factor`.
    pub fn scaled(mut self, factor: f64) -> Self {
        for w in &mut self.weights {
            *w *= factor;
        }
        self
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# cam weight\n");
        for (c, w) in self.cams.iter().zip(&self.weights) {
            s.push_str(&format!("{c} {w}\n"));
        }
        s
    }
}

impl Default for RoughnessWeights {
    fn default() -> Self {
        Self::standard()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoughnessParams {
    pub q_r: f64,
    pub weights: RoughnessWeights,
}

impl RoughnessParams {
    pub fn for_variant(variant: Variant) -> Self {
        let q_r = match variant {
            Variant::Gammatone => 3.15e-3,
            Variant::Gammachirp => 3.20e-3,
        };
        RoughnessParams { q_r, weights: RoughnessWeights::standard() }
    }
}

/// `R'_k = (w·ΔL·i)²` with the edge-dependent correlation factors.
pub fn specific_roughness(k: usize, delta_level: f64, weight: f64, pairs: &[f64]) -> f64 {
    let (below, above) = correlation_factors(k, pairs);
    (weight * delta_level * below.unwrap_or(1.0) * above.unwrap_or(1.0)).powi(2)
}

/// Roughness from a modulation analysis run with roughness settings.
pub fn roughness(analysis: ModulationAnalysis, grid: &ChannelGrid, params: &RoughnessParams) -> Result<ModulationMetric> {
    let w = params.weights.for_grid(grid);
    if w.len() != analysis.delta_level.len() {
        return Err(crate::error::invalid("weight table and analysis disagree on channel count"));
    }
    ModulationMetric::from_analysis(analysis, params.q_r, |k, dl, prod| (w[k] * dl * prod).powi(2))
}
