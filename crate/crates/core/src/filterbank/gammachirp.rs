//! Analytic gammachirp channel: gammatone core cascaded with a minimum-phase
//! IIR asymmetric-compensation filter approximating `exp(c·θ(f))`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::gammatone::{gammatone_sections, BANDWIDTH_FACTOR, ORDER};
use crate::dsp::{Biquad, Sos};
use crate::erb::erb_of;
use crate::error::{Error, Result};
use crate::tables::parse_rows;

/// Chirp range applied after the level mapping: the span over which the
/// fitted compensation cascade stays within 0.5 dB of `exp(c·θ)`.
pub const CHIRP_MIN: f64 = -3.8;
pub const CHIRP_MAX: f64 = 3.38;

const FIT_STEP: f64 = 0.1;
const FIT_TABLE: &str = include_str!("../../data/acf_fit.txt");

/// Per-section (pole-radius, offset) coefficients, one row per `|c|` step.
fn fit_rows() -> &'static [[f64; 8]] {
    static ROWS: OnceLock<Vec<[f64; 8]>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let rows = parse_rows(FIT_TABLE, 9).expect("bundled compensation table is well formed");
        rows.iter()
            .enumerate()
            .map(|(i, r)| {
                assert!((r[0] - FIT_STEP * (i + 1) as f64).abs() < 1e-9, "compensation table must step by 0.1");
                let mut out = [0.0; 8];
                out.copy_from_slice(&r[1..]);
                out
            })
            .collect()
    })
}

/// Rounds a chirp to the resolution of the fitted compensation table.
pub fn quantize_chirp(c: f64) -> f64 {
    (c / FIT_STEP).round() * FIT_STEP
}

/// Level-dependent chirp, `c = 3.38 - 0.107·Ps`.
pub fn chirp_from_level(level_db: f64) -> f64 {
    3.38 - 0.107 * level_db
}

/// Centre frequency of the gammatone core whose gammachirp peaks at
/// `peak_hz`; the peak sits `c·b·ERB(fr)/n` away from the core frequency.
pub fn core_frequency(peak_hz: f64, c: f64) -> f64 {
    let k = c * BANDWIDTH_FACTOR / ORDER as f64;
    (peak_hz - k * 24.7) / (1.0 + k * 24.7 * 4.37 / 1000.0)
}

/// Target magnitude of the asymmetric function in dB.
pub fn asymmetry_db(f_hz: f64, core_hz: f64, c: f64) -> f64 {
    let theta = ((f_hz - core_hz) / (BANDWIDTH_FACTOR * erb_of(core_hz))).atan();
    20.0 * (c * theta).exp().log10()
}

/// Four-section asymmetric-compensation cascade centred on `core_hz`,
/// unity gain at `core_hz`. `|c|` is rounded to the fitted 0.1 grid, so
/// `|c| < 0.05` gives an exact identity.
pub fn asymmetric_compensation(core_hz: f64, sample_rate: f64, c: f64) -> Result<Sos> {
    if !c.is_finite() || !(CHIRP_MIN - 0.05..=-CHIRP_MIN + 0.05).contains(&c) {
        return Err(Error::UnstableDesign(format!("chirp {c} outside the fitted range ±{}", -CHIRP_MIN)));
    }
    let step = (c.abs() / FIT_STEP).round() as usize;
    if step == 0 {
        return Ok(Sos::default());
    }
    let c = c.signum() * step as f64 * FIT_STEP;
    let row = &fit_rows()[step - 1];
    let bw = BANDWIDTH_FACTOR * erb_of(core_hz);
    let z = Complex64::from_polar(1.0, -2.0 * PI * core_hz / sample_rate);
    let eval = |p: &[f64; 3]| p[0] + p[1] * z + p[2] * z * z;
    let mut sos = Sos::default();
    for (n, pair) in row.chunks_exact(2).enumerate() {
        let r = (-pair[0] * 2.0 * PI * bw / sample_rate).exp();
        let shift = pair[1] * c * bw;
        let phi = 2.0 * PI * (core_hz + shift).max(0.0) / sample_rate;
        let psi = 2.0 * PI * (core_hz - shift).max(0.0) / sample_rate;
        let den = [1.0, -2.0 * r * phi.cos(), r * r];
        let num = [1.0, -2.0 * r * psi.cos(), r * r];
        let norm = (eval(&den) / eval(&num)).norm();
        let section = Biquad::new([num[0] * norm, num[1] * norm, num[2] * norm], den);
        if !section.is_stable() {
            return Err(Error::UnstableDesign(format!("compensation section {n} at {core_hz} Hz")));
        }
        sos.push(section);
    }
    Ok(sos)
}

/// Gammachirp channel peaking at `peak_hz`, unity gain there.
pub fn gammachirp_sections(peak_hz: f64, sample_rate: f64, c: f64) -> Result<Sos> {
    let c = quantize_chirp(c);
    if c == 0.0 {
        return gammatone_sections(peak_hz, sample_rate);
    }
    let core = core_frequency(peak_hz, c);
    let nyquist = sample_rate / 2.0;
    if !(core > 0.0 && core < nyquist) {
        return Err(Error::AboveNyquist { freq_hz: core, nyquist_hz: nyquist });
    }
    let mut sos = gammatone_sections(core, sample_rate)?;
    sos.extend(&asymmetric_compensation(core, sample_rate, c)?);
    let g = sos.response(peak_hz, sample_rate).norm();
    sos.scale(1.0 / g);
    Ok(sos)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FS: f64 = 44_100.0;

    #[test]
    fn zero_chirp_level() {
        assert!(chirp_from_level(3.38 / 0.107).abs() < 1e-12);
        assert!((chirp_from_level(0.0) - 3.38).abs() < 1e-12);
    }

    #[test]
    fn compensation_identity_at_zero_chirp() {
        let acf = asymmetric_compensation(1000.0, FS, 0.0).unwrap();
        for f in [100.0, 900.0, 1000.0, 5000.0] {
            assert!(acf.magnitude_db(f, FS).abs() < 1e-9);
        }
    }

    #[test]
    fn negative_chirp_tilts_low() {
        let acf = asymmetric_compensation(2000.0, FS, -2.0).unwrap();
        assert!(acf.magnitude_db(1700.0, FS) > 0.0);
        assert!(acf.magnitude_db(2300.0, FS) < 0.0);
    }

    #[test]
    fn fit_within_budget_over_chirp_range() {
        let mut worst: f64 = 0.0;
        for &fr in &[500.0, 1000.0, 2000.0, 4000.0, 8000.0, 10_000.0] {
            for step in -38..=38 {
                let c = step as f64 * 0.1;
                let acf = asymmetric_compensation(fr, FS, c).unwrap();
                let erb = erb_of(fr);
                for i in -30..=30 {
                    let f = fr + i as f64 * 0.1 * erb;
                    let err = acf.magnitude_db(f, FS) - asymmetry_db(f, fr, c);
                    worst = worst.max(err.abs());
                }
            }
        }
        assert!(worst < 0.5, "worst fit error {worst} dB");
    }

    #[test]
    fn rejects_chirp_outside_fit() {
        assert!(matches!(asymmetric_compensation(1000.0, FS, -4.5), Err(Error::UnstableDesign(_))));
        assert!(asymmetric_compensation(1000.0, FS, f64::NAN).is_err());
    }

    #[test]
    fn peak_stays_at_channel_frequency() {
        for &c in &[-3.8, -2.0, 2.0, 3.38] {
            let sos = gammachirp_sections(2000.0, FS, c).unwrap();
            assert!(sos.magnitude_db(2000.0, FS).abs() < 1e-9);
            let erb = erb_of(2000.0);
            let (mut best, mut at) = (f64::MIN, 0.0);
            for i in -400..=400 {
                let f = 2000.0 + i as f64 * 0.005 * erb;
                let m = sos.magnitude_db(f, FS);
                if m > best {
                    best = m;
                    at = f;
                }
            }
            assert!((at - 2000.0).abs() < 0.15 * erb, "c {c}: peak at {at}");
        }
    }
}
