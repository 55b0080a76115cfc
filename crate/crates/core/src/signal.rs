//! Pressure waveforms in pascals.

use crate::error::{invalid, Result};

/// Reference sound pressure, 20 µPa.
pub const P_REF: f64 = 20e-6;

pub const DEFAULT_SAMPLE_RATE: f64 = 44_100.0;

/// A mono sound-pressure waveform sampled at a fixed rate.
///
/// Samples are in pascals, so the sound pressure level of any segment can be
/// computed from the samples alone.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedSignal {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl CalibratedSignal {
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(invalid(format!("sample rate must be positive, got {sample_rate}")));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(invalid(format!("sample {i} is not finite")));
        }
        Ok(Self { samples, sample_rate })
    }

    pub fn silence(len: usize, sample_rate: f64) -> Result<Self> {
        Self::new(vec![0.0; len], sample_rate)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    pub fn rms(&self) -> f64 {
        rms(&self.samples)
    }

    /// Sound pressure level of the whole signal in dB re 20 µPa.
    pub fn spl_db(&self) -> f64 {
        spl_from_rms(self.rms())
    }

    /// Returns a copy multiplied by `gain`.
    pub fn scaled(&self, gain: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s * gain).collect(),
            sample_rate: self.sample_rate,
        }
    }

    /// Returns a copy whose overall level is `level_db` SPL.
    ///
    /// A silent signal stays silent.
    pub fn with_spl(&self, level_db: f64) -> Self {
        let r = self.rms();
        if r == 0.0 {
            return self.clone();
        }
        self.scaled(rms_from_spl(level_db) / r)
    }
}

pub fn rms(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

pub fn spl_from_rms(p_rms: f64) -> f64 {
    20.0 * (p_rms / P_REF).log10()
}

pub fn rms_from_spl(level_db: f64) -> f64 {
    P_REF * 10f64.powf(level_db / 20.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_rate_and_non_finite() {
        assert!(CalibratedSignal::new(vec![0.0], 0.0).is_err());
        assert!(CalibratedSignal::new(vec![f64::NAN], 44_100.0).is_err());
    }

    #[test]
    fn spl_roundtrip() {
        assert!((rms_from_spl(40.0) - 2.0e-3).abs() < 1e-15);
        assert!((spl_from_rms(P_REF)).abs() < 1e-12);
        let s = CalibratedSignal::new(vec![1.0, -1.0, 1.0, -1.0], 1000.0).unwrap();
        assert!((s.with_spl(70.0).spl_db() - 70.0).abs() < 1e-9);
    }
}
