//! Inner-hair-cell stage: half-wave rectification, squaring and a
//! second-order leaky integrator.

use std::f64::consts::PI;

use crate::earfilter::EarFilter;
use crate::filterbank::{gammatone_sections, ChannelGrid};
use crate::error::Result;
use crate::signal::P_REF;

/// Cut-off of each integrator stage.
pub const INTEGRATOR_CUTOFF_HZ: f64 = 1200.0;

/// Two cascaded one-pole stages `a / (1 - p z⁻¹)` with `p = exp(-2π fc/fs)`
/// and `a = 1 / (1 - p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakyIntegrator {
    pole: f64,
    gain: f64,
}

impl LeakyIntegrator {
    pub fn new(sample_rate: f64) -> Self {
        let pole = (-2.0 * PI * INTEGRATOR_CUTOFF_HZ / sample_rate).exp();
        LeakyIntegrator { pole, gain: 1.0 / (1.0 - pole) }
    }

    pub fn pole(&self) -> f64 {
        self.pole
    }

    /// Gain of the cascade at DC.
    pub fn dc_gain(&self) -> f64 {
        (self.gain / (1.0 - self.pole)).powi(2)
    }

    /// Excitation `E / E_0` of a channel signal, computed in place.
    pub fn excite_in_place(&self, x: &mut [f64], e0: f64) {
        let (p, g) = (self.pole, self.gain / e0.sqrt());
        let (mut y1, mut y2) = (0.0, 0.0);
        for v in x.iter_mut() {
            let r = v.max(0.0);
            y1 = g * r * r + p * y1;
            y2 = g * y1 + p * y2;
            *v = y2;
        }
    }
}

/// Excitation of a channel signal relative to `e0`.
pub fn excitation(x: &[f64], sample_rate: f64, e0: f64) -> Vec<f64> {
    let mut out = x.to_vec();
    LeakyIntegrator::new(sample_rate).excite_in_place(&mut out, e0);
    out
}

/// Steady excitation of a 1 kHz tone at 0 dB SPL in its strongest
/// gammatone channel, behind the given ear filter. A sinusoid of amplitude
/// P gives a rectified-squared mean of P²/4.
pub fn reference_excitation(ear: &EarFilter, grid: &ChannelGrid) -> Result<f64> {
    let fs = ear.sample_rate();
    let amp = P_REF * 2f64.sqrt() * ear.response(1000.0).norm();
    let mut peak: f64 = 0.0;
    let k0 = grid.nearest(1000.0);
    for k in k0.saturating_sub(3)..(k0 + 4).min(grid.len()) {
        let h = gammatone_sections(grid.channel(k).freq_hz, fs)?.response(1000.0, fs).norm();
        peak = peak.max(h);
    }
    let a = amp * peak;
    Ok(a * a / 4.0 * LeakyIntegrator::new(fs).dc_gain())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_in_zero_out() {
        assert!(excitation(&[0.0; 64], 44_100.0, 1.0).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn integrator_gain_as_specified() {
        let li = LeakyIntegrator::new(44_100.0);
        let p = (-2.0 * PI * 1200.0 / 44_100.0f64).exp();
        assert!((li.pole() - p).abs() < 1e-15);
        assert!((li.dc_gain() - (1.0 - p).powi(-4)).abs() / li.dc_gain() < 1e-12);
    }

    #[test]
    fn squaring_law() {
        let x: Vec<f64> = (0..4410).map(|i| (2.0 * PI * 1000.0 * i as f64 / 44_100.0).sin()).collect();
        let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let (e1, e2) = (excitation(&x, 44_100.0, 1.0), excitation(&x2, 44_100.0, 1.0));
        for i in 4000..4410 {
            assert!((e2[i] - 4.0 * e1[i]).abs() <= 1e-9 * e2[i].abs().max(1.0));
        }
    }

    #[test]
    fn settled_mean_matches_quarter_power() {
        let fs = 44_100.0;
        let x: Vec<f64> = (0..8820).map(|i| (2.0 * PI * 1000.0 * i as f64 / fs).sin()).collect();
        let li = LeakyIntegrator::new(fs);
        let e = excitation(&x, fs, li.dc_gain());
        // 50 ms onward, averaged over whole periods.
        let tail = &e[2205..2205 + 4410];
        let mean = tail.iter().sum::<f64>() / tail.len() as f64;
        assert!((mean - 0.25).abs() < 1e-3, "{mean}");
    }
}
