//! Fourth-order gammatone channel as four one-zero/two-pole sections.

use std::f64::consts::PI;

use crate::dsp::{Biquad, Sos};
use crate::erb::erb_of;
use crate::error::{Error, Result};

pub const ORDER: usize = 4;
pub const BANDWIDTH_FACTOR: f64 = 1.019;

/// Impulse-invariant cascade of four complex-conjugate pole pairs at the
/// channel frequency, each with one real zero placed so the cascade
/// approximates the gamma envelope. Normalized to unity gain at `center_hz`.
pub fn gammatone_sections(center_hz: f64, sample_rate: f64) -> Result<Sos> {
    let nyquist = sample_rate / 2.0;
    if !(center_hz > 0.0 && center_hz < nyquist) {
        return Err(Error::AboveNyquist { freq_hz: center_hz, nyquist_hz: nyquist });
    }
    let t = 1.0 / sample_rate;
    let bw = 2.0 * PI * BANDWIDTH_FACTOR * erb_of(center_hz);
    let arg = 2.0 * PI * center_hz * t;
    let decay = (-bw * t).exp();
    let (cos, sin) = (arg.cos(), arg.sin());
    let plus = (3.0 + 2f64.powf(1.5)).sqrt();
    let minus = (3.0 - 2f64.powf(1.5)).sqrt();

    let a1 = -2.0 * cos * decay;
    let a2 = decay * decay;
    let mut sos = Sos::new(
        [plus, -plus, minus, -minus]
            .iter()
            .map(|&k| Biquad { b0: t, b1: -t * decay * (cos + k * sin), b2: 0.0, a1, a2 })
            .collect(),
    );
    let g = sos.response(center_hz, sample_rate).norm();
    sos.scale(1.0 / g);
    Ok(sos)
}
