//! Excitation, specific loudness and total loudness.

mod excitation;
mod params;
mod sone_phon;

pub use excitation::{excitation, reference_excitation, LeakyIntegrator, INTEGRATOR_CUTOFF_HZ};
pub use params::{
    ChannelParams, LoudnessParams, LoudnessRow, LoudnessTable, ALPHA_BASE, E_THRQ_MID_DB, HIGH_BRANCH_START,
};
pub use sone_phon::{SonePhonMap, SONE_PHON_LEVELS};

use crate::bank::{ChannelBank, SteadyWindow};
use crate::error::{invalid, Result};
use crate::exec::Execution;

/// Specific loudness of an excitation bank (`E / E_0`), sample by sample.
pub fn specific_loudness(excitation: &ChannelBank, params: &[ChannelParams], exec: Execution) -> Result<ChannelBank> {
    if params.len() != excitation.num_channels() {
        return Err(invalid("one parameter set per channel required"));
    }
    if excitation.channels().iter().flatten().any(|e| !(*e >= 0.0)) {
        return Err(invalid("excitation must be finite and non-negative"));
    }
    Ok(excitation.map_channels(exec, |k, e| e.iter().map(|&v| params[k].specific(v)).collect()))
}

/// Total loudness in sone with its steady-state average.
#[derive(Debug, Clone)]
pub struct LoudnessResult {
    specific: ChannelBank,
    total: Vec<f64>,
    window: SteadyWindow,
    mean: f64,
}

impl LoudnessResult {
    pub fn specific(&self) -> &ChannelBank {
        &self.specific
    }

    /// N(t) in sone at the rate of the specific-loudness bank.
    pub fn total(&self) -> &[f64] {
        &self.total
    }

    pub fn sample_rate(&self) -> f64 {
        self.specific.sample_rate()
    }

    pub fn window(&self) -> SteadyWindow {
        self.window
    }

    /// Time-averaged loudness over the steady window.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Time-averaged specific loudness per channel.
    pub fn specific_mean(&self) -> Vec<f64> {
        self.specific.channel_means(self.window)
    }

    pub fn total_csv(&self) -> String {
        let fs = self.sample_rate();
        let mut s = String::from("t,N\n");
        for (i, n) in self.total.iter().enumerate() {
            s.push_str(&format!("{:.6},{:.9}\n", i as f64 / fs, n));
        }
        s
    }

    pub fn specific_csv(&self) -> String {
        ChannelBank::values_csv(self.specific.grid(), "N_prime", &self.specific_mean())
    }
}

/// Integrates specific loudness (sone per Cam) over the ERB-number axis and
/// averages after `warmup_s`.
pub fn total_loudness(specific: ChannelBank, warmup_s: f64) -> LoudnessResult {
    let n = specific.num_samples();
    let dz = specific.grid().step_cam();
    let mut total = vec![0.0; n];
    for ch in specific.channels() {
        for (t, v) in total.iter_mut().zip(ch) {
            *t += v;
        }
    }
    for t in total.iter_mut() {
        *t *= dz;
    }
    let window = specific.window(warmup_s);
    let mean = window.mean(&total);
    LoudnessResult { specific, total, window, mean }
}
