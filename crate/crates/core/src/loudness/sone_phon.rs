//! Loudness-level ↔ loudness relation of the model itself, sampled on 1 kHz
//! tones and interpolated linearly.

use crate::error::{invalid, Error, Result};
use crate::tables::interp_clamped;

/// Tone levels (dB SPL = phon at 1 kHz) sampled by default.
pub const SONE_PHON_LEVELS: [f64; 21] = [
    0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0, 55.0, 60.0, 65.0, 70.0, 75.0, 80.0, 85.0, 90.0,
    95.0, 100.0,
];

#[derive(Debug, Clone, PartialEq)]
pub struct SonePhonMap {
    phons: Vec<f64>,
    sones: Vec<f64>,
}

impl SonePhonMap {
    /// Samples must strictly increase in both coordinates.
    pub fn new(phons: Vec<f64>, sones: Vec<f64>) -> Result<Self> {
        if phons.len() != sones.len() || phons.len() < 2 {
            return Err(invalid("sone/phon map needs at least two paired samples"));
        }
        for i in 1..phons.len() {
            if phons[i] <= phons[i - 1] {
                return Err(invalid("phon samples must increase"));
            }
            if !(sones[i] > sones[i - 1]) {
                return Err(Error::NonMonotone(phons[i]));
            }
        }
        if !(sones[0] >= 0.0) {
            return Err(Error::NonMonotone(phons[0]));
        }
        Ok(SonePhonMap { phons, sones })
    }

    /// Evaluates `loudness` (1 kHz tone level → sone) at each level.
    pub fn build<F>(levels: &[f64], mut loudness: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let sones = levels.iter().map(|&l| loudness(l)).collect::<Result<Vec<_>>>()?;
        Self::new(levels.to_vec(), sones)
    }

    pub fn phons(&self) -> &[f64] {
        &self.phons
    }

    pub fn sones(&self) -> &[f64] {
        &self.sones
    }

    /// Loudness at a loudness level; falls linearly to 0 sone at 0 phon
    /// below the first sample and extrapolates the last segment above.
    pub fn sone(&self, phon: f64) -> f64 {
        let (p0, s0) = (self.phons[0], self.sones[0]);
        if phon < p0 {
            return if p0 > 0.0 { (s0 * phon / p0).max(0.0) } else { 0.0 };
        }
        extrapolate_last(&self.phons, &self.sones, phon)
    }

    /// The level transform: loudness level of `sone`. Inputs below the first
    /// sample clamp to the first phon value.
    pub fn phon(&self, sone: f64) -> f64 {
        if sone <= self.sones[0] {
            return self.phons[0];
        }
        extrapolate_last(&self.sones, &self.phons, sone)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("phon,sone\n");
        for (p, n) in self.phons.iter().zip(&self.sones) {
            s.push_str(&format!("{p},{n:.9}\n"));
        }
        s
    }
}

fn extrapolate_last(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let last = xs.len() - 1;
    if x > xs[last] {
        let slope = (ys[last] - ys[last - 1]) / (xs[last] - xs[last - 1]);
        return ys[last] + slope * (x - xs[last]);
    }
    interp_clamped(xs, ys, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal() -> SonePhonMap {
        SonePhonMap::build(&SONE_PHON_LEVELS, |l| Ok(2f64.powf((l - 40.0) / 10.0))).unwrap()
    }

    #[test]
    fn inverse_pair() {
        let m = ideal();
        for p in [3.0, 40.0, 57.5, 99.0] {
            assert!((m.phon(m.sone(p)) - p).abs() < 1e-9);
        }
    }

    #[test]
    fn doubling_in_phon() {
        let m = ideal();
        assert!((m.phon(2.0) - m.phon(1.0) - 10.0).abs() < 1e-9);
        assert!((m.sone(60.0) / m.sone(40.0) - 4.0).abs() < 1e-9);
    }

    #[test]
    fn clamps_below_and_extrapolates_above() {
        let m = ideal();
        assert_eq!(m.phon(0.0), 0.0);
        assert_eq!(m.phon(-1.0), 0.0);
        assert!(m.phon(m.sones()[20] * 1.5) > 100.0);
    }

    #[test]
    fn rejects_non_monotone() {
        let r = SonePhonMap::new(vec![0.0, 10.0, 20.0], vec![0.1, 0.3, 0.3]);
        assert!(matches!(r, Err(Error::NonMonotone(p)) if p == 20.0));
    }
}
