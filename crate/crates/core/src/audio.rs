//! Mono WAV input and output with an explicit SPL calibration: a full-scale
//! sinusoid corresponds to `fullscale_db` dB SPL.

use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{Error, Result};
use crate::signal::{CalibratedSignal, P_REF};

pub const DEFAULT_FULLSCALE_DB: f64 = 94.0;

/// Pascals per unit of full-scale sample value.
pub fn pascals_per_unit(fullscale_db: f64) -> f64 {
    P_REF * 10f64.powf(fullscale_db / 20.0) * std::f64::consts::SQRT_2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WavEncoding {
    Pcm16,
    Pcm24,
    #[default]
    Float32,
}

pub fn read_audio(path: &Path, fullscale_db: f64) -> Result<CalibratedSignal> {
    let reader = WavReader::open(path).map_err(|e| match e {
        hound::Error::IoError(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => Error::UnsupportedAudio(format!("{}: {other}", path.display())),
    })?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(Error::UnsupportedAudio(format!("{}: {} channels, only mono is supported", path.display(), spec.channels)));
    }
    let unit = pascals_per_unit(fullscale_db);
    let samples: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Float, 32) => reader.into_samples::<f32>().map(|s| s.map(|v| v as f64 * unit)).collect::<std::result::Result<_, _>>()?,
        (SampleFormat::Int, bits @ (16 | 24)) => {
            let scale = unit / (1i64 << (bits - 1)) as f64;
            reader.into_samples::<i32>().map(|s| s.map(|v| v as f64 * scale)).collect::<std::result::Result<_, _>>()?
        }
        (fmt, bits) => {
            return Err(Error::UnsupportedAudio(format!("{}: {bits}-bit {fmt:?} samples", path.display())));
        }
    };
    CalibratedSignal::new(samples, spec.sample_rate as f64)
}

pub fn write_audio(path: &Path, signal: &CalibratedSignal, fullscale_db: f64, encoding: WavEncoding) -> Result<()> {
    let rate = signal.sample_rate();
    if rate.fract() != 0.0 || rate <= 0.0 || rate > u32::MAX as f64 {
        return Err(Error::UnsupportedAudio(format!("sample rate {rate} Hz is not a positive integer")));
    }
    let (bits, format) = match encoding {
        WavEncoding::Pcm16 => (16, SampleFormat::Int),
        WavEncoding::Pcm24 => (24, SampleFormat::Int),
        WavEncoding::Float32 => (32, SampleFormat::Float),
    };
    let spec = WavSpec { channels: 1, sample_rate: rate as u32, bits_per_sample: bits, sample_format: format };
    let unit = pascals_per_unit(fullscale_db);
    let mut writer = WavWriter::create(path, spec)?;
    match encoding {
        WavEncoding::Float32 => {
            for &p in signal.samples() {
                writer.write_sample((p / unit) as f32)?;
            }
        }
        WavEncoding::Pcm16 | WavEncoding::Pcm24 => {
            let full = (1i64 << (bits - 1)) as f64;
            for &p in signal.samples() {
                let v = (p / unit * full).round();
                if v < -full || v > full - 1.0 {
                    return Err(Error::UnsupportedAudio(format!("sample {p} Pa clips at {fullscale_db} dB full scale")));
                }
                writer.write_sample(v as i32)?;
            }
        }
    }
    writer.finalize()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_scale_sine_is_one_pascal() {
        let peak = pascals_per_unit(94.0);
        assert!((peak / std::f64::consts::SQRT_2 - 1.0).abs() < 3e-3);
    }
}
