//! Test-signal generators and level/loudness calibration.
//!
//! Every generator builds the raw waveform first and then rescales it to the
//! requested SPL from its measured rms, so zero-depth AM and zero-deviation
//! FM reproduce [`gen_sine`] bit for bit.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::signal::{rms, rms_from_spl, CalibratedSignal, DEFAULT_SAMPLE_RATE};

/// Upper edge of high-pass noise.
pub const HP_HIGH_EDGE_HZ: f64 = 10_000.0;
/// Lower edge of low-pass noise.
pub const LP_LOW_EDGE_HZ: f64 = 200.0;

const NB_LOW: (f64, f64) = (200.0, 104.0);
const NB_HIGH: (f64, f64) = (10_000.0, 2463.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StimulusKind {
    Sine { freq_hz: f64 },
    Am { carrier_hz: f64, mod_freq_hz: f64, depth: f64 },
    Fm { carrier_hz: f64, mod_freq_hz: f64, deviation_hz: f64 },
    NbNoise { center_hz: f64, bandwidth_hz: f64, seed: u64 },
    HpNoise { low_cut_hz: f64, seed: u64 },
    LpNoise { high_cut_hz: f64, seed: u64 },
}

/// Declarative test signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StimulusSpec {
    #[serde(flatten)]
    pub kind: StimulusKind,
    pub duration_s: f64,
    pub level_db_spl: f64,
    #[serde(default = "default_rate")]
    pub sample_rate: f64,
}

fn default_rate() -> f64 {
    DEFAULT_SAMPLE_RATE
}

impl StimulusSpec {
    pub fn new(kind: StimulusKind, duration_s: f64, level_db_spl: f64) -> Self {
        Self { kind, duration_s, level_db_spl, sample_rate: DEFAULT_SAMPLE_RATE }
    }

    pub fn with_sample_rate(mut self, sample_rate: f64) -> Self {
        self.sample_rate = sample_rate;
        self
    }

    pub fn is_noise(&self) -> bool {
        matches!(
            self.kind,
            StimulusKind::NbNoise { .. } | StimulusKind::HpNoise { .. } | StimulusKind::LpNoise { .. }
        )
    }

    /// Band edges of a noise stimulus.
    pub fn band_edges(&self) -> Option<(f64, f64)> {
        match self.kind {
            StimulusKind::NbNoise { center_hz, bandwidth_hz, .. } => Some(nb_edges(center_hz, bandwidth_hz)),
            StimulusKind::HpNoise { low_cut_hz, .. } => Some((low_cut_hz, HP_HIGH_EDGE_HZ)),
            StimulusKind::LpNoise { high_cut_hz, .. } => Some((LP_LOW_EDGE_HZ, high_cut_hz)),
            _ => None,
        }
    }

    pub fn generate(&self) -> Result<CalibratedSignal> {
        let (d, l, fs) = (self.duration_s, self.level_db_spl, self.sample_rate);
        match self.kind {
            StimulusKind::Sine { freq_hz } => gen_sine(freq_hz, d, l, fs),
            StimulusKind::Am { carrier_hz, mod_freq_hz, depth } => gen_am(carrier_hz, mod_freq_hz, depth, d, l, fs),
            StimulusKind::Fm { carrier_hz, mod_freq_hz, deviation_hz } => {
                gen_fm(carrier_hz, mod_freq_hz, deviation_hz, d, l, fs)
            }
            _ => gen_noise(self),
        }
    }
}

/// Band edges of a narrow-band noise: geometric-mean centre, `hi - lo = bw`.
fn nb_edges(center: f64, bw: f64) -> (f64, f64) {
    let half = bw / 2.0;
    let lo = -half + (half * half + center * center).sqrt();
    (lo, lo + bw)
}

/// Critical bandwidth used for narrow-band noise, pinned so the 200 Hz and
/// 10 kHz centres get 104 Hz and 2463 Hz.
pub fn nb_bandwidth(center_hz: f64) -> f64 {
    let cb = |f: f64| 25.0 + 75.0 * (1.0 + 1.4 * (f / 1000.0).powi(2)).powf(0.69);
    let corr = |f: f64, target: f64| (target / cb(f)).ln();
    let (c0, c1) = (corr(NB_LOW.0, NB_LOW.1), corr(NB_HIGH.0, NB_HIGH.1));
    let t = ((center_hz.ln() - NB_LOW.0.ln()) / (NB_HIGH.0.ln() - NB_LOW.0.ln())).clamp(0.0, 1.0);
    cb(center_hz) * (c0 + t * (c1 - c0)).exp()
}

fn sample_count(duration_s: f64, fs: f64) -> Result<usize> {
    if !(duration_s.is_finite() && duration_s > 0.0) {
        return Err(invalid(format!("duration must be positive, got {duration_s}")));
    }
    if !(fs.is_finite() && fs > 0.0) {
        return Err(invalid(format!("sample rate must be positive, got {fs}")));
    }
    let n = (duration_s * fs).round() as usize;
    if n == 0 {
        return Err(invalid("duration shorter than one sample"));
    }
    Ok(n)
}

fn check_freq(f: f64, fs: f64) -> Result<()> {
    if !(f.is_finite() && f > 0.0) {
        return Err(invalid(format!("frequency must be positive, got {f}")));
    }
    if f >= fs / 2.0 {
        return Err(Error::AboveNyquist { freq_hz: f, nyquist_hz: fs / 2.0 });
    }
    Ok(())
}

fn calibrate(raw: Vec<f64>, level_db: f64, fs: f64) -> Result<CalibratedSignal> {
    if !level_db.is_finite() {
        return Err(invalid("level must be finite"));
    }
    let r = rms(&raw);
    if r == 0.0 {
        return Err(Error::SilentInput("level calibration"));
    }
    let g = rms_from_spl(level_db) / r;
    CalibratedSignal::new(raw.into_iter().map(|v| v * g).collect(), fs)
}

pub fn gen_sine(freq_hz: f64, duration_s: f64, level_db_spl: f64, sample_rate: f64) -> Result<CalibratedSignal> {
    let n = sample_count(duration_s, sample_rate)?;
    check_freq(freq_hz, sample_rate)?;
    let w = 2.0 * PI * freq_hz / sample_rate;
    calibrate((0..n).map(|i| (w * i as f64).sin()).collect(), level_db_spl, sample_rate)
}

/// Sinusoidally amplitude-modulated tone `(1 + m cos(2π fm t)) sin(2π fc t)`.
pub fn gen_am(
    carrier_hz: f64,
    mod_freq_hz: f64,
    depth: f64,
    duration_s: f64,
    level_db_spl: f64,
    sample_rate: f64,
) -> Result<CalibratedSignal> {
    if !(0.0..=1.0).contains(&depth) {
        return Err(invalid(format!("modulation depth must be in [0, 1], got {depth}")));
    }
    if !(mod_freq_hz.is_finite() && mod_freq_hz >= 0.0) {
        return Err(invalid(format!("modulation frequency must be non-negative, got {mod_freq_hz}")));
    }
    let n = sample_count(duration_s, sample_rate)?;
    check_freq(carrier_hz, sample_rate)?;
    let wc = 2.0 * PI * carrier_hz / sample_rate;
    let wm = 2.0 * PI * mod_freq_hz / sample_rate;
    let raw = (0..n)
        .map(|i| {
            let t = i as f64;
            let carrier = (wc * t).sin();
            if depth == 0.0 {
                carrier
            } else {
                (1.0 + depth * (wm * t).cos()) * carrier
            }
        })
        .collect();
    calibrate(raw, level_db_spl, sample_rate)
}

/// Sinusoidally frequency-modulated tone with instantaneous frequency
/// `fc + Δf cos(2π fm t)`.
pub fn gen_fm(
    carrier_hz: f64,
    mod_freq_hz: f64,
    deviation_hz: f64,
    duration_s: f64,
    level_db_spl: f64,
    sample_rate: f64,
) -> Result<CalibratedSignal> {
    let n = sample_count(duration_s, sample_rate)?;
    check_freq(carrier_hz, sample_rate)?;
    if !(deviation_hz.is_finite() && deviation_hz >= 0.0) {
        return Err(invalid(format!("deviation must be non-negative, got {deviation_hz}")));
    }
    if deviation_hz > 0.0 {
        if !(mod_freq_hz.is_finite() && mod_freq_hz > 0.0) {
            return Err(invalid("FM with nonzero deviation needs a positive modulation frequency"));
        }
        let (lo, hi) = (carrier_hz - deviation_hz, carrier_hz + deviation_hz);
        if lo <= 0.0 || hi >= sample_rate / 2.0 {
            return Err(invalid(format!(
                "instantaneous frequency spans [{lo}, {hi}] Hz, outside (0, {})",
                sample_rate / 2.0
            )));
        }
    }
    let wc = 2.0 * PI * carrier_hz / sample_rate;
    let wm = 2.0 * PI * mod_freq_hz / sample_rate;
    let beta = if deviation_hz == 0.0 { 0.0 } else { deviation_hz / mod_freq_hz };
    let raw = (0..n)
        .map(|i| {
            let t = i as f64;
            if beta == 0.0 {
                (wc * t).sin()
            } else {
                (wc * t + beta * (wm * t).sin()).sin()
            }
        })
        .collect();
    calibrate(raw, level_db_spl, sample_rate)
}

/// Seeded Gaussian white noise shaped by a brick-wall spectral mask.
pub fn gen_noise(spec: &StimulusSpec) -> Result<CalibratedSignal> {
    let seed = match spec.kind {
        StimulusKind::NbNoise { seed, bandwidth_hz, .. } => {
            if !(bandwidth_hz.is_finite() && bandwidth_hz > 0.0) {
                return Err(invalid(format!("bandwidth must be positive, got {bandwidth_hz}")));
            }
            seed
        }
        StimulusKind::HpNoise { seed, .. } | StimulusKind::LpNoise { seed, .. } => seed,
        _ => return Err(invalid("gen_noise needs a noise stimulus")),
    };
    let fs = spec.sample_rate;
    let n = sample_count(spec.duration_s, fs)?;
    let (lo, hi) = spec.band_edges().expect("noise kind has edges");
    if !(lo > 0.0 && hi > lo && hi < fs / 2.0) {
        return Err(invalid(format!("band edges [{lo}, {hi}] Hz must satisfy 0 < low < high < {}", fs / 2.0)));
    }
    let band = band_limited_noise(n, fs, lo, hi, seed);
    if rms(&band) == 0.0 {
        return Err(invalid(format!("band [{lo}, {hi}] Hz contains no frequency bins")));
    }
    calibrate(band, spec.level_db_spl, fs)
}

fn band_limited_noise(n: usize, fs: f64, lo: f64, hi: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(StandardNormal.sample(&mut rng), 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let df = fs / n as f64;
    for (i, b) in buf.iter_mut().enumerate() {
        let bin = i.min(n - i) as f64 * df;
        if bin < lo || bin > hi {
            *b = Complex64::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.into_iter().map(|c| c.re / n as f64).collect()
}

/// Rescales `signal` so that `loudness` (time-averaged total loudness in
/// sone) lands within 1% of `target_sone`. Bisection on gain in dB.
pub fn scale_to_loudness<F>(signal: &CalibratedSignal, target_sone: f64, mut loudness: F) -> Result<CalibratedSignal>
where
    F: FnMut(&CalibratedSignal) -> Result<f64>,
{
    const MAX_ITER: usize = 60;
    const TOL: f64 = 0.01;
    if !(target_sone.is_finite() && target_sone > 0.0) {
        return Err(invalid(format!("target loudness must be positive, got {target_sone}")));
    }
    if signal.rms() == 0.0 {
        return Err(Error::SilentInput("loudness scaling"));
    }
    let mut eval = |g_db: f64| -> Result<(CalibratedSignal, f64)> {
        let s = signal.scaled(10f64.powf(g_db / 20.0));
        let n = loudness(&s)?;
        Ok((s, n))
    };
    let close = |n: f64| (n / target_sone - 1.0).abs() < TOL;

    let (s0, n0) = eval(0.0)?;
    if close(n0) {
        return Ok(s0);
    }
    // Loudness grows roughly as pressure^0.6 above threshold.
    let guess = if n0 > 0.0 { 20.0 / 0.6 * (target_sone / n0).log10() } else { 40.0 };
    let mut iters = 1;
    let (mut lo, mut hi) = if n0 < target_sone { (0.0, guess.max(1.0)) } else { (guess.min(-1.0), 0.0) };
    // Expand until the bracket holds the target.
    loop {
        if iters >= MAX_ITER {
            return Err(Error::NoConvergence(iters));
        }
        if n0 < target_sone {
            let (s, n) = eval(hi)?;
            iters += 1;
            if close(n) {
                return Ok(s);
            }
            if n > target_sone {
                break;
            }
            lo = hi;
            hi += 10.0;
        } else {
            let (s, n) = eval(lo)?;
            iters += 1;
            if close(n) {
                return Ok(s);
            }
            if n < target_sone {
                break;
            }
            hi = lo;
            lo -= 10.0;
        }
    }
    while iters < MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let (s, n) = eval(mid)?;
        iters += 1;
        if close(n) {
            return Ok(s);
        }
        if n < target_sone {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence(iters))
}
