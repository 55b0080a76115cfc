//! Outer- and middle-ear transfer, realized as a minimum-phase FIR.

use std::path::Path;

use num_complex::Complex64;

use crate::dsp::{fft_convolve, minimum_phase_fir};
use crate::error::{Error, Result};
use crate::signal::CalibratedSignal;
use crate::tables::{check_increasing, parse_rows, read_rows};

const FREE_FIELD: &str = include_str!("../data/ear_free_field.txt");
const DIFFUSE_FIELD: &str = include_str!("../data/ear_diffuse_field.txt");
const MIDDLE_EAR: &str = include_str!("../data/middle_ear.txt");

/// Lowest sample rate whose Nyquist band covers the tabulated transfer.
pub const MIN_SAMPLE_RATE: f64 = 32_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SoundField {
    #[default]
    Free,
    Diffuse,
    /// Signal is already referred to the eardrum; middle ear only.
    Eardrum,
}

/// Gain in dB tabulated against frequency; interpolated linearly in
/// log-frequency and held constant beyond the end points.
#[derive(Debug, Clone, PartialEq)]
pub struct EarTransferTable {
    log_freqs: Vec<f64>,
    gains_db: Vec<f64>,
}

impl EarTransferTable {
    pub fn for_field(field: SoundField) -> Self {
        let text = match field {
            SoundField::Free => FREE_FIELD,
            SoundField::Diffuse => DIFFUSE_FIELD,
            SoundField::Eardrum => MIDDLE_EAR,
        };
        Self::parse(text).expect("bundled ear table is valid")
    }

    /// All-pass (0 dB) table.
    pub fn flat() -> Self {
        EarTransferTable { log_freqs: vec![20f64.ln(), 20_000f64.ln()], gains_db: vec![0.0, 0.0] }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_rows(parse_rows(text, 2)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_rows(read_rows(path, 2)?)
    }

    fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        check_increasing(&rows)?;
        if rows[0][0] <= 0.0 {
            return Err(Error::Table { line: 1, msg: "frequencies must be positive".into() });
        }
        Ok(EarTransferTable {
            log_freqs: rows.iter().map(|r| r[0].ln()).collect(),
            gains_db: rows.iter().map(|r| r[1]).collect(),
        })
    }

    pub fn gain_db(&self, f_hz: f64) -> f64 {
        let x = f_hz.max(1e-3).ln();
        crate::tables::interp_clamped(&self.log_freqs, &self.gains_db, x)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# frequency_hz gain_db\n");
        for (lf, g) in self.log_freqs.iter().zip(&self.gains_db) {
            s.push_str(&format!("{:.6} {:.4}\n", lf.exp(), g));
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct EarFilter {
    taps: Vec<f64>,
    sample_rate: f64,
}

impl EarFilter {
    pub fn design(table: &EarTransferTable, sample_rate: f64) -> Result<Self> {
        if sample_rate < MIN_SAMPLE_RATE {
            return Err(Error::RateTooLow(sample_rate));
        }
        let n_fft = if sample_rate <= 50_000.0 { 1 << 16 } else { 1 << 17 };
        let taps = minimum_phase_fir(
            |f| 10f64.powf(table.gain_db(f) / 20.0),
            sample_rate,
            n_fft,
            n_fft / 16,
        );
        Ok(EarFilter { taps, sample_rate })
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn response(&self, f_hz: f64) -> Complex64 {
        let w = -2.0 * std::f64::consts::PI * f_hz / self.sample_rate;
        self.taps
            .iter()
            .enumerate()
            .map(|(n, &h)| Complex64::from_polar(h, w * n as f64))
            .sum()
    }

    pub fn gain_db(&self, f_hz: f64) -> f64 {
        20.0 * self.response(f_hz).norm().log10()
    }

    /// Causal filtering; output has the input's length.
    pub fn apply(&self, signal: &CalibratedSignal) -> Result<CalibratedSignal> {
        if signal.sample_rate() != self.sample_rate {
            return Err(Error::RateMismatch {
                expected: self.sample_rate,
                actual: signal.sample_rate(),
            });
        }
        let y = fft_convolve(signal.samples(), &self.taps, signal.len());
        CalibratedSignal::new(y, self.sample_rate)
    }
}

/// Designs the filter for `table` at the signal's rate and applies it.
pub fn apply_ear_filter(signal: &CalibratedSignal, table: &EarTransferTable) -> Result<CalibratedSignal> {
    EarFilter::design(table, signal.sample_rate())?.apply(signal)
}
