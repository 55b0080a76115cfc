//! ERB-spaced gammatone and gammachirp filterbanks.
//!
//! Both banks are cascades of second-order sections per channel, normalized
//! to unity gain at the channel frequency. The gammachirp bank is level
//! dependent: its chirp per channel comes from the channel levels of a
//! gammatone analysis of the same signal (see [`design_gcfb`]).

mod gammachirp;
mod gammatone;
mod grid;

pub use gammachirp::{
    asymmetric_compensation, asymmetry_db, chirp_from_level, core_frequency, gammachirp_sections, quantize_chirp,
    CHIRP_MAX, CHIRP_MIN,
};
pub use gammatone::{gammatone_sections, BANDWIDTH_FACTOR, ORDER};
pub use grid::{Channel, ChannelGrid, CAM_STEP};

use crate::bank::ChannelBank;
use crate::dsp::Sos;
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::signal::{rms, spl_from_rms, CalibratedSignal};
use crate::Variant;

/// Default level assigned to channels with (near) zero output.
pub const LEVEL_FLOOR_DB: f64 = -30.0;

/// Half-width, in channels, of the triangular smoothing kernel (1 Cam total).
const SMOOTH_HALF_WIDTH: usize = 5;

/// Designed filterbank; immutable once built.
#[derive(Debug, Clone)]
pub struct Filterbank {
    variant: Variant,
    grid: ChannelGrid,
    sample_rate: f64,
    filters: Vec<Sos>,
    chirp: Option<Vec<f64>>,
}

pub fn design_gtfb(grid: &ChannelGrid, sample_rate: f64) -> Result<Filterbank> {
    let filters = grid
        .channels()
        .iter()
        .map(|ch| gammatone_sections(ch.freq_hz, sample_rate))
        .collect::<Result<Vec<_>>>()?;
    Ok(Filterbank { variant: Variant::Gammatone, grid: grid.clone(), sample_rate, filters, chirp: None })
}

/// Gammachirp bank from per-channel levels (dB SPL, already smoothed):
/// each chirp is `3.38 - 0.107·Ps` clamped to `[CHIRP_MIN, CHIRP_MAX]`.
pub fn design_gcfb(grid: &ChannelGrid, sample_rate: f64, levels_db: &[f64]) -> Result<Filterbank> {
    if levels_db.len() != grid.len() {
        return Err(invalid("one level per channel required"));
    }
    if levels_db.iter().any(|l| !l.is_finite()) {
        return Err(invalid("channel levels must be finite"));
    }
    let chirp: Vec<f64> = levels_db
        .iter()
        .map(|&l| chirp_from_level(l).clamp(CHIRP_MIN, CHIRP_MAX))
        .collect();
    design_gcfb_with_chirp(grid, sample_rate, &chirp)
}

/// Gammachirp bank with explicit chirp coefficients.
pub fn design_gcfb_with_chirp(grid: &ChannelGrid, sample_rate: f64, chirp: &[f64]) -> Result<Filterbank> {
    if chirp.len() != grid.len() {
        return Err(invalid("one chirp coefficient per channel required"));
    }
    let filters = grid
        .channels()
        .iter()
        .zip(chirp)
        .map(|(ch, &c)| gammachirp_sections(ch.freq_hz, sample_rate, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Filterbank {
        variant: Variant::Gammachirp,
        grid: grid.clone(),
        sample_rate,
        filters,
        chirp: Some(chirp.iter().map(|&c| quantize_chirp(c)).collect()),
    })
}

impl Filterbank {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn grid(&self) -> &ChannelGrid {
        &self.grid
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn filter(&self, k: usize) -> &Sos {
        &self.filters[k]
    }

    pub fn chirp(&self) -> Option<&[f64]> {
        self.chirp.as_deref()
    }

    fn check_rate(&self, signal: &CalibratedSignal) -> Result<()> {
        if signal.sample_rate() != self.sample_rate {
            return Err(Error::RateMismatch { expected: self.sample_rate, actual: signal.sample_rate() });
        }
        Ok(())
    }

    /// Filters one channel; output has the input's length.
    pub fn filter_channel(&self, k: usize, x: &[f64]) -> Vec<f64> {
        self.filters[k].process(x)
    }

    /// Splits the signal into the bank's channels.
    pub fn analyze(&self, signal: &CalibratedSignal, exec: Execution) -> Result<ChannelBank> {
        self.check_rate(signal)?;
        let data = exec.map_range(self.filters.len(), |k| self.filter_channel(k, signal.samples()));
        ChannelBank::new(self.grid.clone(), self.sample_rate, data)
    }

    /// Per-channel output level in dB SPL over the whole signal, floored and
    /// smoothed. Streams one channel at a time.
    pub fn channel_levels(&self, signal: &CalibratedSignal, floor_db: f64, exec: Execution) -> Result<Vec<f64>> {
        self.check_rate(signal)?;
        let raw = exec.map_range(self.filters.len(), |k| rms(&self.filter_channel(k, signal.samples())));
        Ok(levels_from_rms(&raw, floor_db))
    }
}

/// Channel levels of an analysed bank: rms in dB SPL over the whole
/// signal, floored at `floor_db`, then smoothed across channels.
pub fn estimate_channel_levels(bank: &ChannelBank, floor_db: f64) -> Vec<f64> {
    let raw: Vec<f64> = bank.channels().iter().map(|c| rms(c)).collect();
    levels_from_rms(&raw, floor_db)
}

fn levels_from_rms(raw: &[f64], floor_db: f64) -> Vec<f64> {
    let db: Vec<f64> = raw
        .iter()
        .map(|&r| if r > 0.0 { spl_from_rms(r).max(floor_db) } else { floor_db })
        .collect();
    smooth_across_channels(&db)
}

/// Symmetric triangular moving average spanning 1 Cam (11 channels),
/// renormalized where the kernel runs off the grid edge.
pub fn smooth_across_channels(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let h = SMOOTH_HALF_WIDTH as isize;
    (0..n as isize)
        .map(|k| {
            let (mut acc, mut wsum) = (0.0, 0.0);
            for j in -h..=h {
                let i = k + j;
                if i < 0 || i >= n as isize {
                    continue;
                }
                let w = (h + 1 - j.abs()) as f64;
                acc += w * values[i as usize];
                wsum += w;
            }
            acc / wsum
        })
        .collect()
}
