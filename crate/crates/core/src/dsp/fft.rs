use num_complex::Complex64;
use rustfft::FftPlanner;

/// Magnitude of the analytic signal `x + j·Hilbert(x)`, computed with a
/// single FFT over the whole input.
pub fn analytic_magnitude(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fwd.process(&mut buf);
    // One-sided spectrum: keep DC (and Nyquist for even n), double positive bins.
    let half = n / 2;
    for (i, c) in buf.iter_mut().enumerate() {
        let w = if i == 0 || (n % 2 == 0 && i == half) {
            1.0
        } else if i <= (n - 1) / 2 {
            2.0
        } else {
            0.0
        };
        *c *= w;
    }
    inv.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter().map(|c| c.norm() * scale).collect()
}

/// Linear convolution of `x` with `h`, truncated to the first `out_len`
/// output samples.
pub fn fft_convolve(x: &[f64], h: &[f64], out_len: usize) -> Vec<f64> {
    if x.is_empty() || h.is_empty() {
        return vec![0.0; out_len];
    }
    let full = x.len() + h.len() - 1;
    let n = full.next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut a = vec![Complex64::new(0.0, 0.0); n];
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    for (dst, &v) in a.iter_mut().zip(x) {
        dst.re = v;
    }
    for (dst, &v) in b.iter_mut().zip(h) {
        dst.re = v;
    }
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (p, q) in a.iter_mut().zip(&b) {
        *p *= q;
    }
    inv.process(&mut a);
    let scale = 1.0 / n as f64;
    let mut out: Vec<f64> = a.iter().take(out_len.min(full)).map(|c| c.re * scale).collect();
    out.resize(out_len, 0.0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn envelope_of_sinusoid_is_its_amplitude() {
        // Integer number of cycles: the analytic signal is exact.
        let n = 1000;
        let x: Vec<f64> = (0..n).map(|i| 2.5 * (2.0 * PI * 7.0 * i as f64 / n as f64).cos()).collect();
        let env = analytic_magnitude(&x);
        assert!(env.iter().all(|e| (e - 2.5).abs() < 1e-9));
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(analytic_magnitude(&neg).len(), n);
        for (a, b) in env.iter().zip(analytic_magnitude(&neg)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn convolution_matches_direct_sum() {
        let x: Vec<f64> = (0..50).map(|i| ((i * 37 % 11) as f64) - 5.0).collect();
        let h = [0.5, -0.25, 0.125, 1.0];
        let y = fft_convolve(&x, &h, x.len());
        for n in 0..x.len() {
            let direct: f64 = (0..h.len()).filter(|&k| k <= n).map(|k| h[k] * x[n - k]).sum();
            assert!((y[n] - direct).abs() < 1e-10);
        }
    }
}
