//! ERB bandwidth and ERB-number (Cam) scale.

/// Equivalent rectangular bandwidth of the normal auditory filter, in Hz.
pub fn erb_of(f_hz: f64) -> f64 {
    24.7 * (4.37 * f_hz / 1000.0 + 1.0)
}

/// Frequency in Hz at a given ERB-number.
pub fn cam_to_freq(cam: f64) -> f64 {
    (10f64.powf(cam / 21.4) - 1.0) * 1000.0 / 4.37
}

/// ERB-number (Cam) of a frequency in Hz.
pub fn freq_to_cam(f_hz: f64) -> f64 {
    21.4 * (4.37 * f_hz / 1000.0 + 1.0).log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erb_at_1k() {
        assert!((erb_of(1000.0) - 132.639).abs() < 1e-9);
        assert!((erb_of(1e-12) - 24.7).abs() < 1e-9);
    }

    #[test]
    fn cam_of_1k() {
        // 21.4 * log10(5.37)
        assert!((freq_to_cam(1000.0) - 15.6212).abs() < 1e-3);
    }

    #[test]
    fn inverse_pair() {
        for &f in &[20.0, 100.0, 1000.0, 5432.1, 15000.0] {
            let back = cam_to_freq(freq_to_cam(f));
            assert!(((back - f) / f).abs() < 1e-9);
        }
    }
}
