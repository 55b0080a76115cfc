//! Machinery shared by roughness and fluctuation strength: DC removal,
//! modulation band-pass, Hilbert envelopes on the loudness-level scale,
//! peak/dip level difference and cross-channel correlation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::bank::SteadyWindow;
use crate::dsp::{analytic_magnitude, butterworth_highpass, butterworth_lowpass, decimate_mean, Sos};
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::loudness::{LoudnessResult, SonePhonMap};
use crate::series::MetricSeries;

/// Channel distance (1 Cam on a 0.1-Cam grid) between correlated channels.
pub const CORRELATION_OFFSET: usize = 10;
/// Largest lag searched by the normalized cross-correlation.
pub const MAX_LAG_S: f64 = 0.01;
/// Order of the envelope low-pass.
pub const ENVELOPE_ORDER: usize = 9;

const ROUGHNESS_BP_ORDER: i32 = 3;

/// Modulation band analysed by a metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModulationBand {
    /// Per-channel third-order gammatone band-pass; 7 Hz envelope low-pass.
    Roughness,
    /// 2–5 Hz Butterworth band-pass; 0.4 Hz envelope low-pass.
    Fluctuation,
}

impl ModulationBand {
    pub fn envelope_cutoff_hz(self) -> f64 {
        match self {
            ModulationBand::Roughness => 7.0,
            ModulationBand::Fluctuation => 0.4,
        }
    }

    /// Further decimation applied to the specific-loudness bank.
    pub fn decimation(self) -> usize {
        match self {
            ModulationBand::Roughness => 1,
            ModulationBand::Fluctuation => 8,
        }
    }
}

/// Removes the mean in place and returns it.
pub fn remove_dc(x: &mut [f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let m = x.iter().sum::<f64>() / x.len() as f64;
    for v in x.iter_mut() {
        *v -= m;
    }
    m
}

/// Centre frequency of the roughness band-pass for a channel at `cam`.
pub fn roughness_center_hz(cam: f64) -> f64 {
    69.2 / (1.0 + (-(cam - 4.58) / 1.48).exp())
}

pub fn roughness_bandwidth_hz(cam: f64) -> f64 {
    1.58 * roughness_center_hz(cam)
}

/// Impulse-invariant realization of `t² exp(-2π W t) cos(2π C t)`: a
/// complex third-order pole at `exp((-2πW + j2πC)/fs)`, real part taken,
/// scaled to unity peak gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammatoneBandpass {
    pole: Complex64,
    gain: f64,
}

impl GammatoneBandpass {
    pub fn design(center_hz: f64, bandwidth_hz: f64, sample_rate: f64) -> Result<Self> {
        if !(center_hz > 0.0 && center_hz < sample_rate / 2.0 && bandwidth_hz > 0.0) {
            return Err(invalid(format!("band-pass at {center_hz} Hz / {bandwidth_hz} Hz is not realizable")));
        }
        let t = 1.0 / sample_rate;
        let pole = Complex64::new(-2.0 * PI * bandwidth_hz * t, 2.0 * PI * center_hz * t).exp();
        let mut bp = GammatoneBandpass { pole, gain: 1.0 };
        let peak = (0..=4000)
            .map(|i| bp.response(i as f64 / 4000.0 * sample_rate / 2.0, sample_rate).norm())
            .fold(0.0, f64::max);
        bp.gain = 1.0 / peak;
        Ok(bp)
    }

    fn complex_response(&self, f_hz: f64, sample_rate: f64) -> Complex64 {
        let zi = Complex64::from_polar(1.0, -2.0 * PI * f_hz / sample_rate);
        let p = self.pole;
        (p * zi + p * p * zi * zi) / (Complex64::new(1.0, 0.0) - p * zi).powi(ROUGHNESS_BP_ORDER)
    }

    /// Response of the real-part filter to a real sinusoid.
    pub fn response(&self, f_hz: f64, sample_rate: f64) -> Complex64 {
        let h = self.complex_response(f_hz, sample_rate) + self.complex_response(-f_hz, sample_rate).conj();
        h * 0.5 * self.gain
    }

    pub fn process(&self, x: &[f64]) -> Vec<f64> {
        let p = self.pole;
        let (p2, p3) = (p * p, p * p * p);
        let (a1, a2, a3) = (p * 3.0, -p2 * 3.0, p3);
        let zero = Complex64::new(0.0, 0.0);
        let (mut x1, mut x2) = (0.0, 0.0);
        let (mut y1, mut y2, mut y3) = (zero, zero, zero);
        x.iter()
            .map(|&v| {
                let y = p * x1 + p2 * x2 + a1 * y1 + a2 * y2 + a3 * y3;
                x2 = x1;
                x1 = v;
                y3 = y2;
                y2 = y1;
                y1 = y;
                y.re * self.gain
            })
            .collect()
    }
}

/// Cascade of a 5 Hz second-order Butterworth low-pass and a 2 Hz
/// second-order Butterworth high-pass.
pub fn fluctuation_bandpass(sample_rate: f64) -> Result<Sos> {
    let mut sos = butterworth_lowpass(2, 5.0, sample_rate)?;
    sos.extend(&butterworth_highpass(2, 2.0, sample_rate)?);
    Ok(sos)
}

/// Low-passed analytic-signal magnitude. The low-pass starts in the steady
/// state of the envelope mean.
pub fn envelope(bp: &[f64], lowpass: &Sos) -> Vec<f64> {
    let mut env = analytic_magnitude(bp);
    let mean = if env.is_empty() { 0.0 } else { env.iter().sum::<f64>() / env.len() as f64 };
    lowpass.process_steady_in_place(&mut env, mean);
    env
}

/// Maximum over integer lags `|τ| ≤ max_lag` of
/// `Σ x(t) y(t+τ) / sqrt(Σ x(t)² · Σ y(t+τ)²)`, all sums over the overlap.
/// Zero-energy inputs give 0.
pub fn xcorr_norm(x: &[f64], y: &[f64], max_lag: usize) -> f64 {
    let n = x.len().min(y.len());
    if n == 0 {
        return 0.0;
    }
    let (x, y) = (&x[..n], &y[..n]);
    let ex: f64 = x.iter().map(|v| v * v).sum();
    let ey: f64 = y.iter().map(|v| v * v).sum();
    if ex == 0.0 || ey == 0.0 {
        return 0.0;
    }
    let max_lag = max_lag.min(n - 1);
    let size = (n + max_lag).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let mut a = vec![Complex64::new(0.0, 0.0); size];
    let mut b = vec![Complex64::new(0.0, 0.0); size];
    for i in 0..n {
        a[i].re = x[i];
        b[i].re = y[i];
    }
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (p, q) in a.iter_mut().zip(&b) {
        *p = p.conj() * q;
    }
    inv.process(&mut a);
    let scale = 1.0 / size as f64;
    let prefix = |s: &[f64]| {
        let mut acc = Vec::with_capacity(s.len() + 1);
        acc.push(0.0);
        for v in s {
            acc.push(acc.last().unwrap() + v * v);
        }
        acc
    };
    let (px, py) = (prefix(x), prefix(y));
    let mut best = f64::NEG_INFINITY;
    for lag in -(max_lag as isize)..=max_lag as isize {
        // Overlap: t in [t0, t1) with t + lag in range.
        let (t0, t1) = if lag >= 0 { (0, n - lag as usize) } else { ((-lag) as usize, n) };
        let (u0, u1) = ((t0 as isize + lag) as usize, (t1 as isize + lag) as usize);
        let exo = px[t1] - px[t0];
        let eyo = py[u1] - py[u0];
        let denom = (exo * eyo).sqrt();
        let idx = if lag >= 0 { lag as usize } else { size - (-lag) as usize };
        let c = a[idx].re * scale;
        let v = if denom > 0.0 { c / denom } else { 0.0 };
        best = best.max(v);
    }
    best.clamp(-1.0, 1.0)
}

/// Correlations between channels `j` and `j + 10`.
pub fn correlation_pairs(bp: &[Vec<f64>], max_lag: usize, exec: Execution) -> Result<Vec<f64>> {
    let k = bp.len();
    if k < 2 * CORRELATION_OFFSET + 1 {
        return Err(Error::TooFewChannels(k));
    }
    Ok(exec.map_range(k - CORRELATION_OFFSET, |j| xcorr_norm(&bp[j], &bp[j + CORRELATION_OFFSET], max_lag)))
}

/// The correlation factors `(i_{k-10}, i_k)` entering channel `k`: only
/// `i_k` for the lowest ten channels, only `i_{k-10}` for the highest
/// eleven, both in between.
pub fn correlation_factors(k: usize, pairs: &[f64]) -> (Option<f64>, Option<f64>) {
    let n = pairs.len() + CORRELATION_OFFSET;
    let below = (k >= CORRELATION_OFFSET).then(|| pairs[k - CORRELATION_OFFSET]);
    let above = (k + CORRELATION_OFFSET + 1 < n).then(|| pairs[k]);
    (below, above)
}

/// Product of the available correlation factors of channel `k`.
pub fn correlation_product(k: usize, pairs: &[f64]) -> f64 {
    let (b, a) = correlation_factors(k, pairs);
    b.unwrap_or(1.0) * a.unwrap_or(1.0)
}

/// Per-channel modulation statistics over the steady window.
#[derive(Debug, Clone)]
pub struct ModulationAnalysis {
    /// Window mean of each channel (removed before band-pass).
    pub dc: Vec<f64>,
    /// Time-averaged peak/dip level difference per channel.
    pub delta_level: Vec<f64>,
    /// Peak/dip level difference over time per channel.
    pub delta_series: Vec<Vec<f64>>,
    /// `i` between channels `j` and `j + 10`.
    pub pairs: Vec<f64>,
    /// DC-free, band-passed specific loudness per channel.
    pub bandpassed: Vec<Vec<f64>>,
    /// Low-passed Hilbert envelope of each band-passed channel.
    pub envelopes: Vec<Vec<f64>>,
    pub sample_rate: f64,
}

impl ModulationAnalysis {
    pub fn correlation_product(&self, k: usize) -> f64 {
        correlation_product(k, &self.pairs)
    }
}

/// Runs DC removal, band-pass, envelopes, level difference and correlation
/// on the steady window of a loudness result.
pub fn analyze_modulation(
    loudness: &LoudnessResult,
    band: ModulationBand,
    map: &SonePhonMap,
    exec: Execution,
) -> Result<ModulationAnalysis> {
    let bank = loudness.specific();
    let kn = bank.num_channels();
    if kn < 2 * CORRELATION_OFFSET + 1 {
        return Err(Error::TooFewChannels(kn));
    }
    let dec = band.decimation();
    let fs = bank.sample_rate() / dec as f64;
    let window = loudness.window();
    let raw: Vec<Vec<f64>> =
        exec.map_range(kn, |k| decimate_mean(window.slice(bank.channel(k)), dec));
    let n = raw[0].len();
    if n < 4 {
        return Err(invalid("steady window too short for modulation analysis"));
    }
    let lowpass = butterworth_lowpass(ENVELOPE_ORDER, band.envelope_cutoff_hz(), fs)?;
    let fluct_bp = match band {
        ModulationBand::Fluctuation => Some(fluctuation_bandpass(fs)?),
        ModulationBand::Roughness => None,
    };
    let cams: Vec<f64> = bank.grid().cams().collect();

    // Loudness level of every channel and its per-time maximum.
    let levels: Vec<Vec<f64>> = exec.map_range(kn, |k| raw[k].iter().map(|&v| map.phon(v)).collect());
    let mut level_max = vec![0.0f64; n];
    for ch in &levels {
        for (m, v) in level_max.iter_mut().zip(ch) {
            *m = m.max(*v);
        }
    }

    let per_channel = exec.try_map_range(kn, |k| -> Result<(f64, Vec<f64>, Vec<f64>, Vec<f64>)> {
        let mut x = raw[k].clone();
        let dc = remove_dc(&mut x);
        let bp = match &fluct_bp {
            Some(sos) => sos.process(&x),
            None => GammatoneBandpass::design(roughness_center_hz(cams[k]), roughness_bandwidth_hz(cams[k]), fs)?
                .process(&x),
        };
        let env = envelope(&bp, &lowpass);
        let delta: Vec<f64> = env
            .iter()
            .zip(&levels[k])
            .zip(&level_max)
            .map(|((&e, &l), &m)| {
                let upper = map.phon(e.max(0.0));
                let lower = -map.phon(e.max(0.0));
                let w = if m > 0.0 { l / m } else { 0.0 };
                (upper - lower) * w
            })
            .collect();
        Ok((dc, bp, env, delta))
    })?;

    let mut dc = Vec::with_capacity(kn);
    let mut bps = Vec::with_capacity(kn);
    let mut envelopes = Vec::with_capacity(kn);
    let mut delta_series = Vec::with_capacity(kn);
    for (d, bp, env, delta) in per_channel {
        dc.push(d);
        bps.push(bp);
        envelopes.push(env);
        delta_series.push(delta);
    }
    let max_lag = (MAX_LAG_S * fs).round() as usize;
    let pairs = correlation_pairs(&bps, max_lag, exec)?;
    let all = SteadyWindow { start: 0, end: n };
    let delta_level = delta_series.iter().map(|d| all.mean(d)).collect();
    Ok(ModulationAnalysis { dc, delta_level, delta_series, pairs, bandpassed: bps, envelopes, sample_rate: fs })
}

/// A modulation metric: time-collapsed scalar, per-channel contributions
/// and an instantaneous series.
#[derive(Debug, Clone)]
pub struct ModulationMetric {
    value: f64,
    specific: Vec<f64>,
    series: MetricSeries,
    analysis: ModulationAnalysis,
}

impl ModulationMetric {
    /// Builds the metric from a per-channel contribution `f(k, ΔL, i-product)`
    /// scaled by `q`. The scalar uses window-averaged ΔL; the series uses ΔL(t).
    pub fn from_analysis<F>(analysis: ModulationAnalysis, q: f64, f: F) -> Result<Self>
    where
        F: Fn(usize, f64, f64) -> f64,
    {
        let kn = analysis.delta_level.len();
        let products: Vec<f64> = (0..kn).map(|k| analysis.correlation_product(k)).collect();
        let specific: Vec<f64> = (0..kn).map(|k| f(k, analysis.delta_level[k], products[k])).collect();
        let value = q * specific.iter().sum::<f64>();
        let n = analysis.delta_series.first().map_or(0, Vec::len);
        let values: Vec<f64> =
            (0..n).map(|t| q * (0..kn).map(|k| f(k, analysis.delta_series[k][t], products[k])).sum::<f64>()).collect();
        let series = MetricSeries::new(values, analysis.sample_rate, SteadyWindow { start: 0, end: n }, "modulation")?;
        Ok(ModulationMetric { value, specific, series, analysis })
    }

    /// Time-collapsed metric value.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// Per-channel contributions before the overall coefficient.
    pub fn specific(&self) -> &[f64] {
        &self.specific
    }

    pub fn series(&self) -> &MetricSeries {
        &self.series
    }

    pub fn analysis(&self) -> &ModulationAnalysis {
        &self.analysis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(x: &[f64], y: &[f64], max_lag: usize) -> f64 {
        let n = x.len();
        let mut best = f64::NEG_INFINITY;
        for lag in -(max_lag as isize)..=max_lag as isize {
            let (mut c, mut ex, mut ey) = (0.0, 0.0, 0.0);
            for t in 0..n as isize {
                let u = t + lag;
                if u < 0 || u >= n as isize {
                    continue;
                }
                c += x[t as usize] * y[u as usize];
                ex += x[t as usize].powi(2);
                ey += y[u as usize].powi(2);
            }
            let v = if ex > 0.0 && ey > 0.0 { c / (ex * ey).sqrt() } else { 0.0 };
            best = best.max(v);
        }
        best
    }

    #[test]
    fn sigmoid_centre() {
        assert!((roughness_center_hz(4.58) - 34.6).abs() < 1e-12);
        assert!((roughness_center_hz(60.0) - 69.2).abs() < 1e-6);
        assert!((roughness_bandwidth_hz(4.58) - 1.58 * 34.6).abs() < 1e-12);
    }

    #[test]
    fn roughness_bandpass_shape() {
        let fs = 5512.5;
        let bp = GammatoneBandpass::design(roughness_center_hz(20.0), roughness_bandwidth_hz(20.0), fs).unwrap();
        assert!(bp.response(70.0, fs).norm() > 0.9);
        assert!(bp.response(5.0, fs).norm() < 0.25);
        assert!(bp.response(200.0, fs).norm() < 0.5);
        // Time-domain gain matches the analytic response.
        let x: Vec<f64> = (0..11025).map(|i| (2.0 * PI * 70.0 * i as f64 / fs).sin()).collect();
        let y = bp.process(&x);
        let peak = y[5512..].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((peak - bp.response(70.0, fs).norm()).abs() < 0.01);
    }

    #[test]
    fn fluctuation_bandpass_shape() {
        let fs = 689.0625;
        let sos = fluctuation_bandpass(fs).unwrap();
        assert!(sos.magnitude_db(4.0, fs) > -3.0);
        assert!(sos.magnitude_db(70.0, fs) < -20.0);
        assert!(sos.magnitude_db(1e-6, fs) < -100.0);
    }

    #[test]
    fn dc_removal() {
        let mut x: Vec<f64> = (0..1000).map(|i| 3.0 + (i as f64 * 0.0628).sin()).collect();
        let dc = remove_dc(&mut x);
        assert!((dc - 3.0).abs() < 0.03);
        let mut c = vec![2.5; 10];
        remove_dc(&mut c);
        assert!(c.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn envelope_of_sinusoid_is_amplitude() {
        let fs = 5512.5;
        let x: Vec<f64> = (0..5512).map(|i| 0.7 * (2.0 * PI * 50.0 * i as f64 / fs).sin()).collect();
        let lp = butterworth_lowpass(ENVELOPE_ORDER, 7.0, fs).unwrap();
        let env = envelope(&x, &lp);
        assert!(env[500..5000].iter().all(|v| (v - 0.7).abs() < 0.01));
    }

    #[test]
    fn xcorr_identities() {
        let x: Vec<f64> = (0..500).map(|i| ((i * 7919) % 113) as f64 - 56.0).collect();
        assert!((xcorr_norm(&x, &x, 10) - 1.0).abs() < 1e-12);
        let mut y = vec![0.0; 5];
        y.extend_from_slice(&x[..495]);
        assert!((xcorr_norm(&x, &y, 10) - 1.0).abs() < 1e-12);
        assert_eq!(xcorr_norm(&x, &[0.0; 500], 10), 0.0);
        assert!((xcorr_norm(&x, &y, 10) - brute(&x, &y, 10)).abs() < 1e-9);
    }

    #[test]
    fn correlation_rule_edges() {
        let k = 30;
        let pairs: Vec<f64> = (0..k - 10).map(|j| 0.5 + j as f64 * 0.01).collect();
        assert_eq!(correlation_factors(0, &pairs), (None, Some(pairs[0])));
        assert_eq!(correlation_factors(9, &pairs), (None, Some(pairs[9])));
        assert_eq!(correlation_factors(10, &pairs), (Some(pairs[0]), Some(pairs[10])));
        assert_eq!(correlation_factors(k - 12, &pairs), (Some(pairs[k - 22]), Some(pairs[k - 12])));
        assert_eq!(correlation_factors(k - 11, &pairs), (Some(pairs[k - 21]), None));
        assert_eq!(correlation_factors(k - 1, &pairs), (Some(pairs[k - 11]), None));
    }

    #[test]
    fn too_few_channels() {
        assert!(matches!(correlation_pairs(&vec![vec![0.0; 10]; 20], 2, Execution::Sequential), Err(Error::TooFewChannels(20))));
    }
}
