//! End-to-end analysis: ear filter → filterbank → excitation → specific
//! loudness, and the metrics built on it.

use std::borrow::Cow;
use std::sync::OnceLock;

use crate::bank::ChannelBank;
use crate::dsp::decimate_mean;
use crate::earfilter::{EarFilter, EarTransferTable, SoundField};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::filterbank::{design_gcfb, design_gtfb, ChannelGrid, Filterbank, LEVEL_FLOOR_DB};
use crate::loudness::{
    reference_excitation, total_loudness, ChannelParams, LeakyIntegrator, LoudnessParams, LoudnessResult,
    SonePhonMap, SONE_PHON_LEVELS,
};
use crate::fluctuation::{fluctuation, FluctuationParams};
use crate::modulation::{analyze_modulation, ModulationAnalysis, ModulationBand, ModulationMetric};
use crate::roughness::{roughness, RoughnessParams};
use crate::series::MetricSeries;
use crate::sharpness::{sharpness, SharpnessParams};
use crate::signal::{CalibratedSignal, DEFAULT_SAMPLE_RATE};
use crate::stimuli::gen_sine;
use crate::Variant;

/// Steady-state warm-up discarded before time averaging.
pub const DEFAULT_WARMUP_S: f64 = 0.2;
/// Decimation of the specific-loudness bank relative to the input rate.
pub const DEFAULT_DECIMATION: usize = 8;
/// Duration of each 1 kHz tone behind the sone/phon map.
pub const SONE_PHON_TONE_S: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct AnalyzerConfig {
    pub variant: Variant,
    pub sample_rate: f64,
    pub ear_table: EarTransferTable,
    pub loudness: LoudnessParams,
    pub sharpness: SharpnessParams,
    pub roughness: RoughnessParams,
    pub fluctuation: FluctuationParams,
    pub warmup_s: f64,
    pub decimation: usize,
    pub level_floor_db: f64,
    pub execution: Execution,
}

impl AnalyzerConfig {
    pub fn new(variant: Variant) -> Self {
        AnalyzerConfig {
            variant,
            sample_rate: DEFAULT_SAMPLE_RATE,
            ear_table: EarTransferTable::for_field(SoundField::Free),
            loudness: LoudnessParams::for_variant(variant),
            sharpness: SharpnessParams::for_variant(variant),
            roughness: RoughnessParams::for_variant(variant),
            fluctuation: FluctuationParams::for_variant(variant),
            warmup_s: DEFAULT_WARMUP_S,
            decimation: DEFAULT_DECIMATION,
            level_floor_db: LEVEL_FLOOR_DB,
            execution: Execution::default(),
        }
    }

    pub fn with_sample_rate(mut self, sample_rate: f64) -> Self {
        self.sample_rate = sample_rate;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn grid(&self) -> ChannelGrid {
        match self.variant {
            Variant::Gammatone => ChannelGrid::gammatone(),
            Variant::Gammachirp => ChannelGrid::gammachirp(),
        }
    }
}

/// Designed analysis chain for one variant and sample rate.
#[derive(Debug)]
pub struct Analyzer {
    config: AnalyzerConfig,
    grid: ChannelGrid,
    ear: EarFilter,
    gtfb: Filterbank,
    e0: f64,
    channels: Vec<ChannelParams>,
    sone_phon: OnceLock<SonePhonMap>,
}

impl Analyzer {
    pub fn new(config: AnalyzerConfig) -> Result<Self> {
        if config.decimation == 0 {
            return Err(crate::error::invalid("decimation must be at least 1"));
        }
        if !(config.warmup_s >= 0.0) {
            return Err(crate::error::invalid("warm-up must be non-negative"));
        }
        let grid = config.grid();
        let ear = EarFilter::design(&config.ear_table, config.sample_rate)?;
        let gtfb = design_gtfb(&grid, config.sample_rate)?;
        let e0 = reference_excitation(&ear, &grid)?;
        let channels = config.loudness.channels(&grid);
        Ok(Analyzer { config, grid, ear, gtfb, e0, channels, sone_phon: OnceLock::new() })
    }

    pub fn for_variant(variant: Variant) -> Result<Self> {
        Self::new(AnalyzerConfig::new(variant))
    }

    pub fn config(&self) -> &AnalyzerConfig {
        &self.config
    }

    pub fn variant(&self) -> Variant {
        self.config.variant
    }

    pub fn grid(&self) -> &ChannelGrid {
        &self.grid
    }

    pub fn sample_rate(&self) -> f64 {
        self.config.sample_rate
    }

    pub fn execution(&self) -> Execution {
        self.config.execution
    }

    /// Reference excitation E_0 in the units of the integrator output.
    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn channel_params(&self) -> &[ChannelParams] {
        &self.channels
    }

    pub fn ear_filter(&self, signal: &CalibratedSignal) -> Result<CalibratedSignal> {
        if signal.sample_rate() != self.config.sample_rate {
            return Err(Error::RateMismatch { expected: self.config.sample_rate, actual: signal.sample_rate() });
        }
        if signal.is_empty() {
            return Err(crate::error::invalid("signal has no samples"));
        }
        self.ear.apply(signal)
    }

    /// Filterbank used for an ear-filtered signal: the fixed gammatone bank,
    /// or a gammachirp bank designed from gammatone channel levels.
    pub fn filterbank(&self, ear_signal: &CalibratedSignal) -> Result<Cow<'_, Filterbank>> {
        match self.config.variant {
            Variant::Gammatone => Ok(Cow::Borrowed(&self.gtfb)),
            Variant::Gammachirp => {
                let levels = self.gtfb.channel_levels(ear_signal, self.config.level_floor_db, self.execution())?;
                Ok(Cow::Owned(design_gcfb(&self.grid, self.config.sample_rate, &levels)?))
            }
        }
    }

    /// Full-rate channel outputs.
    pub fn channel_bank(&self, signal: &CalibratedSignal) -> Result<ChannelBank> {
        let ear = self.ear_filter(signal)?;
        self.filterbank(&ear)?.analyze(&ear, self.execution())
    }

    /// Full-rate excitation `E / E_0`.
    pub fn excitation_bank(&self, signal: &CalibratedSignal) -> Result<ChannelBank> {
        let li = LeakyIntegrator::new(self.config.sample_rate);
        let e0 = self.e0;
        Ok(self.channel_bank(signal)?.map_channels(self.execution(), |_, x| {
            let mut v = x.to_vec();
            li.excite_in_place(&mut v, e0);
            v
        }))
    }

    /// Specific loudness (decimated) and total loudness.
    pub fn loudness(&self, signal: &CalibratedSignal) -> Result<LoudnessResult> {
        let ear = self.ear_filter(signal)?;
        let fb = self.filterbank(&ear)?;
        let li = LeakyIntegrator::new(self.config.sample_rate);
        let (e0, dec) = (self.e0, self.config.decimation);
        let data = self.execution().map_range(self.grid.len(), |k| {
            let mut x = fb.filter_channel(k, ear.samples());
            li.excite_in_place(&mut x, e0);
            let p = &self.channels[k];
            for v in x.iter_mut() {
                *v = p.specific(*v);
            }
            decimate_mean(&x, dec)
        });
        let specific = ChannelBank::new(self.grid.clone(), self.config.sample_rate / dec as f64, data)?;
        Ok(total_loudness(specific, self.config.warmup_s))
    }

    /// The model's own sone/phon relation, built once on first use.
    pub fn sone_phon(&self) -> Result<&SonePhonMap> {
        if let Some(m) = self.sone_phon.get() {
            return Ok(m);
        }
        let fs = self.config.sample_rate;
        let map = SonePhonMap::build(&SONE_PHON_LEVELS, |level| {
            Ok(self.loudness(&gen_sine(1000.0, SONE_PHON_TONE_S, level, fs)?)?.mean())
        })?;
        Ok(self.sone_phon.get_or_init(|| map))
    }

    pub fn sharpness(&self, signal: &CalibratedSignal) -> Result<MetricSeries> {
        sharpness(&self.loudness(signal)?, &self.config.sharpness)
    }

    /// Modulation statistics of an existing loudness result.
    pub fn modulation(&self, loudness: &LoudnessResult, band: ModulationBand) -> Result<ModulationAnalysis> {
        analyze_modulation(loudness, band, self.sone_phon()?, self.execution())
    }

    pub fn roughness_of(&self, loudness: &LoudnessResult) -> Result<ModulationMetric> {
        let analysis = self.modulation(loudness, ModulationBand::Roughness)?;
        roughness(analysis, &self.grid, &self.config.roughness)
    }

    pub fn fluctuation_of(&self, loudness: &LoudnessResult) -> Result<ModulationMetric> {
        let analysis = self.modulation(loudness, ModulationBand::Fluctuation)?;
        fluctuation(analysis, &self.config.fluctuation)
    }

    pub fn roughness(&self, signal: &CalibratedSignal) -> Result<ModulationMetric> {
        self.roughness_of(&self.loudness(signal)?)
    }

    pub fn fluctuation(&self, signal: &CalibratedSignal) -> Result<ModulationMetric> {
        self.fluctuation_of(&self.loudness(signal)?)
    }
}
