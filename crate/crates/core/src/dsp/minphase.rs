use num_complex::Complex64;
use rustfft::FftPlanner;

/// Minimum-phase FIR whose magnitude approximates `magnitude(f)`.
///
/// Homomorphic (folded real cepstrum) construction on an `n_fft`-point grid,
/// truncated to `taps` coefficients with a half-Hann taper over the last
/// eighth of the response. `magnitude` must be strictly positive.
pub fn minimum_phase_fir<F>(magnitude: F, sample_rate: f64, n_fft: usize, taps: usize) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    assert!(n_fft.is_power_of_two() && taps <= n_fft);
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n_fft);
    let inv = planner.plan_fft_inverse(n_fft);

    let mut buf: Vec<Complex64> = (0..n_fft)
        .map(|i| {
            let bin = if i <= n_fft / 2 { i } else { n_fft - i };
            let f = bin as f64 * sample_rate / n_fft as f64;
            Complex64::new(magnitude(f).max(1e-12).ln(), 0.0)
        })
        .collect();
    inv.process(&mut buf);
    let scale = 1.0 / n_fft as f64;
    let half = n_fft / 2;
    for (i, c) in buf.iter_mut().enumerate() {
        let w = if i == 0 || i == half {
            1.0
        } else if i < half {
            2.0
        } else {
            0.0
        };
        *c = Complex64::new(c.re * scale * w, 0.0);
    }
    fwd.process(&mut buf);
    for c in buf.iter_mut() {
        *c = c.exp();
    }
    inv.process(&mut buf);

    let taper_len = (taps / 8).max(1);
    (0..taps)
        .map(|i| {
            let mut v = buf[i].re * scale;
            let from_end = taps - i;
            if from_end <= taper_len {
                let t = from_end as f64 / taper_len as f64;
                v *= 0.5 - 0.5 * (std::f64::consts::PI * t).cos();
            }
            v
        })
        .collect()
}
