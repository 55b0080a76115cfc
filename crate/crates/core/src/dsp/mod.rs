//! Filter primitives shared by the pipeline stages.

mod biquad;
mod fft;
mod minphase;

pub use biquad::{butterworth_highpass, butterworth_lowpass, Biquad, Sos};
pub use fft::{analytic_magnitude, fft_convolve};
pub use minphase::minimum_phase_fir;

/// Boxcar average followed by keeping every `factor`-th output.
///
/// The boxcar has spectral nulls at multiples of the new sample rate, which
/// keeps components near those multiples from folding onto low frequencies.
pub fn decimate_mean(x: &[f64], factor: usize) -> Vec<f64> {
    if factor <= 1 {
        return x.to_vec();
    }
    x.chunks(factor)
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimate_preserves_mean_of_full_blocks() {
        let x: Vec<f64> = (0..64).map(|i| (i % 7) as f64).collect();
        let d = decimate_mean(&x, 8);
        assert_eq!(d.len(), 8);
        let m1: f64 = x.iter().sum::<f64>() / 64.0;
        let m2: f64 = d.iter().sum::<f64>() / 8.0;
        assert!((m1 - m2).abs() < 1e-12);
        assert_eq!(decimate_mean(&x, 1), x);
    }
}
