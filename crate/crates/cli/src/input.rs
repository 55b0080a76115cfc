use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;

use sqm_core::audio::read_audio;
use sqm_core::stimuli::{nb_bandwidth, StimulusKind, StimulusSpec};
use sqm_core::CalibratedSignal;

pub const DEFAULT_SPL_DB: f64 = 70.0;
pub const DEFAULT_DURATION_S: f64 = 1.0;

/// A WAV file or one generated stimulus.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Mono WAV file.
    pub file: Option<PathBuf>,
    /// Sine tone, `FREQ:SPL`.
    #[arg(long, value_name = "F:SPL")]
    pub sine: Option<String>,
    /// AM tone, `CARRIER:MOD_FREQ:DEPTH` (level from --spl).
    #[arg(long, value_name = "C:FM:DEPTH")]
    pub am: Option<String>,
    /// FM tone, `CARRIER:MOD_FREQ:DEVIATION` (level from --spl).
    #[arg(long, value_name = "C:FM:DEV")]
    pub fm: Option<String>,
    /// Noise: `nb:CENTER[:BW]`, `hp:LOW_CUT` or `lp:HIGH_CUT` (level from --spl).
    #[arg(long, value_name = "KIND:..")]
    pub noise: Option<String>,
    /// Level of --am, --fm and --noise stimuli in dB SPL.
    #[arg(long, default_value_t = DEFAULT_SPL_DB)]
    pub spl: f64,
    /// Duration of generated stimuli in seconds.
    #[arg(long, default_value_t = DEFAULT_DURATION_S)]
    pub duration: f64,
    /// Sample rate of generated stimuli.
    #[arg(long, default_value_t = sqm_core::signal::DEFAULT_SAMPLE_RATE)]
    pub sample_rate: f64,
}

fn numbers(flag: &str, text: &str, min: usize, max: usize) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() < min || parts.len() > max {
        bail!("--{flag} expects {min}{} colon-separated numbers, got '{text}'", if max > min { format!("-{max}") } else { String::new() });
    }
    parts
        .iter()
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("--{flag}: '{p}' is not a number")))
        .collect()
}

impl InputArgs {
    pub fn stimulus(&self, seed: u64) -> Result<Option<StimulusSpec>> {
        let given = [self.sine.is_some(), self.am.is_some(), self.fm.is_some(), self.noise.is_some(), self.file.is_some()];
        match given.iter().filter(|&&g| g).count() {
            0 => bail!("no input: give a WAV file or one of --sine, --am, --fm, --noise"),
            1 => {}
            _ => bail!("give exactly one input"),
        }
        let (kind, level) = if let Some(s) = &self.sine {
            let v = numbers("sine", s, 2, 2)?;
            (StimulusKind::Sine { freq_hz: v[0] }, v[1])
        } else if let Some(s) = &self.am {
            let v = numbers("am", s, 3, 3)?;
            (StimulusKind::Am { carrier_hz: v[0], mod_freq_hz: v[1], depth: v[2] }, self.spl)
        } else if let Some(s) = &self.fm {
            let v = numbers("fm", s, 3, 3)?;
            (StimulusKind::Fm { carrier_hz: v[0], mod_freq_hz: v[1], deviation_hz: v[2] }, self.spl)
        } else if let Some(s) = &self.noise {
            let (kind, rest) = s.split_once(':').with_context(|| format!("--noise expects KIND:..., got '{s}'"))?;
            let kind = match kind {
                "nb" => {
                    let v = numbers("noise nb", rest, 1, 2)?;
                    let bw = v.get(1).copied().unwrap_or_else(|| nb_bandwidth(v[0]));
                    StimulusKind::NbNoise { center_hz: v[0], bandwidth_hz: bw, seed }
                }
                "hp" => StimulusKind::HpNoise { low_cut_hz: numbers("noise hp", rest, 1, 1)?[0], seed },
                "lp" => StimulusKind::LpNoise { high_cut_hz: numbers("noise lp", rest, 1, 1)?[0], seed },
                other => bail!("unknown noise kind '{other}' (nb, hp, lp)"),
            };
            (kind, self.spl)
        } else {
            return Ok(None);
        };
        Ok(Some(StimulusSpec::new(kind, self.duration, level).with_sample_rate(self.sample_rate)))
    }

    pub fn signal(&self, fullscale_db: f64, seed: u64) -> Result<CalibratedSignal> {
        match self.stimulus(seed)? {
            Some(spec) => Ok(spec.generate()?),
            None => {
                let path = self.file.as_ref().expect("one input is present");
                read_audio(path, fullscale_db).map_err(Into::into)
            }
        }
    }
}
