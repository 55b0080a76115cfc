use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Second-order section with `a0 = 1`, run in transposed direct form II.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Biquad {
    pub const IDENTITY: Biquad = Biquad { b0: 1.0, b1: 0.0, b2: 0.0, a1: 0.0, a2: 0.0 };

    pub fn new(b: [f64; 3], a: [f64; 3]) -> Self {
        let a0 = a[0];
        Biquad {
            b0: b[0] / a0,
            b1: b[1] / a0,
            b2: b[2] / a0,
            a1: a[1] / a0,
            a2: a[2] / a0,
        }
    }

    pub fn response(&self, f_hz: f64, sample_rate: f64) -> Complex64 {
        let z1 = Complex64::from_polar(1.0, -2.0 * PI * f_hz / sample_rate);
        let z2 = z1 * z1;
        (self.b0 + self.b1 * z1 + self.b2 * z2) / (1.0 + self.a1 * z1 + self.a2 * z2)
    }

    /// Both poles strictly inside the unit circle.
    pub fn is_stable(&self) -> bool {
        self.a2.abs() < 1.0 && self.a1.abs() < 1.0 + self.a2
    }

    pub fn scaled(self, g: f64) -> Self {
        Biquad { b0: self.b0 * g, b1: self.b1 * g, b2: self.b2 * g, ..self }
    }

    fn dc_gain(&self) -> f64 {
        (self.b0 + self.b1 + self.b2) / (1.0 + self.a1 + self.a2)
    }

    #[inline]
    fn run(&self, x: &mut [f64], mut s1: f64, mut s2: f64) {
        let Biquad { b0, b1, b2, a1, a2 } = *self;
        for v in x.iter_mut() {
            let input = *v;
            let y = b0 * input + s1;
            s1 = b1 * input - a1 * y + s2;
            s2 = b2 * input - a2 * y;
            *v = y;
        }
    }
}

/// Four cascaded sections from rest in one pass; same arithmetic as running
/// them one after another.
fn run4(sec: [Biquad; 4], x: &mut [f64]) {
    let mut s1 = [0.0f64; 4];
    let mut s2 = [0.0f64; 4];
    for v in x.iter_mut() {
        let mut u = *v;
        for i in 0..4 {
            let Biquad { b0, b1, b2, a1, a2 } = sec[i];
            let y = b0 * u + s1[i];
            s1[i] = b1 * u - a1 * y + s2[i];
            s2[i] = b2 * u - a2 * y;
            u = y;
        }
        *v = u;
    }
}

/// A cascade of second-order sections.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sos {
    sections: Vec<Biquad>,
}

impl Sos {
    pub fn new(sections: Vec<Biquad>) -> Self {
        Sos { sections }
    }

    pub fn sections(&self) -> &[Biquad] {
        &self.sections
    }

    pub fn push(&mut self, section: Biquad) {
        self.sections.push(section);
    }

    pub fn extend(&mut self, other: &Sos) {
        self.sections.extend_from_slice(&other.sections);
    }

    pub fn response(&self, f_hz: f64, sample_rate: f64) -> Complex64 {
        self.sections
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, s| acc * s.response(f_hz, sample_rate))
    }

    pub fn magnitude_db(&self, f_hz: f64, sample_rate: f64) -> f64 {
        20.0 * self.response(f_hz, sample_rate).norm().log10()
    }

    pub fn is_stable(&self) -> bool {
        self.sections.iter().all(Biquad::is_stable)
    }

    /// Multiplies the overall gain by `g` (applied to the first section).
    pub fn scale(&mut self, g: f64) {
        if let Some(first) = self.sections.first_mut() {
            *first = first.scaled(g);
        } else {
            self.sections.push(Biquad::IDENTITY.scaled(g));
        }
    }

    /// Filters from rest.
    pub fn process(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        self.process_in_place(&mut y);
        y
    }

    pub fn process_in_place(&self, x: &mut [f64]) {
        // Sections are fused four at a time so their recursions overlap.
        let mut groups = self.sections.chunks_exact(4);
        for g in &mut groups {
            run4([g[0], g[1], g[2], g[3]], x);
        }
        for s in groups.remainder() {
            s.run(x, 0.0, 0.0);
        }
    }

    /// Filters with every section's state preset to the steady state it
    /// would reach after an infinitely long constant input equal to
    /// `initial`. A constant input then passes with no start-up transient.
    pub fn process_steady_in_place(&self, x: &mut [f64], initial: f64) {
        let mut u = initial;
        for s in &self.sections {
            let y = s.dc_gain() * u;
            let s2 = s.b2 * u - s.a2 * y;
            let s1 = s.b1 * u - s.a1 * y + s2;
            s.run(x, s1, s2);
            u = y;
        }
    }
}

fn check_cutoff(order: usize, fc: f64, fs: f64) -> Result<f64> {
    if order == 0 {
        return Err(invalid("Butterworth order must be at least 1"));
    }
    if !(fc > 0.0 && fc < fs / 2.0) {
        return Err(invalid(format!("cutoff {fc} Hz outside (0, {}) Hz", fs / 2.0)));
    }
    Ok((PI * fc / fs).tan())
}

fn butterworth_q(order: usize) -> impl Iterator<Item = f64> {
    (0..order / 2).map(move |k| 1.0 / (2.0 * ((2 * k + 1) as f64 * PI / (2 * order) as f64).sin()))
}

/// Digital Butterworth low-pass (bilinear transform with prewarping).
pub fn butterworth_lowpass(order: usize, fc: f64, fs: f64) -> Result<Sos> {
    let k = check_cutoff(order, fc, fs)?;
    let k2 = k * k;
    let mut sos = Sos::default();
    for q in butterworth_q(order) {
        let norm = 1.0 / (1.0 + k / q + k2);
        let b0 = k2 * norm;
        sos.push(Biquad {
            b0,
            b1: 2.0 * b0,
            b2: b0,
            a1: 2.0 * (k2 - 1.0) * norm,
            a2: (1.0 - k / q + k2) * norm,
        });
    }
    if order % 2 == 1 {
        let b0 = k / (1.0 + k);
        sos.push(Biquad { b0, b1: b0, b2: 0.0, a1: (k - 1.0) / (k + 1.0), a2: 0.0 });
    }
    Ok(sos)
}

/// Digital Butterworth high-pass (bilinear transform with prewarping).
pub fn butterworth_highpass(order: usize, fc: f64, fs: f64) -> Result<Sos> {
    let k = check_cutoff(order, fc, fs)?;
    let k2 = k * k;
    let mut sos = Sos::default();
    for q in butterworth_q(order) {
        let norm = 1.0 / (1.0 + k / q + k2);
        sos.push(Biquad {
            b0: norm,
            b1: -2.0 * norm,
            b2: norm,
            a1: 2.0 * (k2 - 1.0) * norm,
            a2: (1.0 - k / q + k2) * norm,
        });
    }
    if order % 2 == 1 {
        let b0 = 1.0 / (1.0 + k);
        sos.push(Biquad { b0, b1: -b0, b2: 0.0, a1: (k - 1.0) / (k + 1.0), a2: 0.0 });
    }
    Ok(sos)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn butterworth_lowpass_is_3db_at_cutoff() {
        for &(order, fc, fs) in &[(2, 5.0, 689.0), (9, 7.0, 5512.5), (9, 0.4, 689.0)] {
            let lp = butterworth_lowpass(order, fc, fs).unwrap();
            assert!(lp.is_stable());
            assert!((lp.magnitude_db(fc, fs) + 3.0103).abs() < 1e-3);
            assert!(lp.magnitude_db(1e-6, fs).abs() < 1e-6);
            // 9th order: -54 dB one octave above; 2nd order: -12 dB.
            let expected = -10.0 * (1.0 + 2f64.powi(2 * order as i32)).log10();
            assert!((lp.magnitude_db(2.0 * fc, fs) - expected).abs() < 0.1);
        }
    }

    #[test]
    fn butterworth_highpass_blocks_dc() {
        let hp = butterworth_highpass(2, 2.0, 689.0).unwrap();
        assert!(hp.response(0.0, 689.0).norm() < 1e-12);
        assert!((hp.magnitude_db(2.0, 689.0) + 3.0103).abs() < 1e-3);
    }

    #[test]
    fn steady_init_passes_constant() {
        let lp = butterworth_lowpass(9, 0.4, 689.0).unwrap();
        let mut x = vec![3.5; 200];
        lp.process_steady_in_place(&mut x, 3.5);
        assert!(x.iter().all(|v| (v - 3.5).abs() < 1e-9));
    }

    #[test]
    fn process_matches_response_on_sinusoid() {
        let fs = 8000.0;
        let lp = butterworth_lowpass(4, 500.0, fs).unwrap();
        let f = 700.0;
        let x: Vec<f64> = (0..8000).map(|n| (2.0 * PI * f * n as f64 / fs).sin()).collect();
        let y = lp.process(&x);
        let tail = &y[4000..];
        let amp = (2.0 * tail.iter().map(|v| v * v).sum::<f64>() / tail.len() as f64).sqrt();
        assert!((amp - lp.response(f, fs).norm()).abs() < 1e-3);
    }
}
