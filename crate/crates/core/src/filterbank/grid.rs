use std::fmt::Write;

use crate::erb::{cam_to_freq, erb_of};
use crate::error::{invalid, Result};

pub const CAM_STEP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub cam: f64,
    pub freq_hz: f64,
    pub erb_hz: f64,
}

/// Channels equally spaced on the ERB-number scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelGrid {
    start_cam: f64,
    step_cam: f64,
    channels: Vec<Channel>,
}

impl ChannelGrid {
    pub fn new(start_cam: f64, end_cam: f64, step_cam: f64) -> Result<Self> {
        if !(start_cam > 0.0 && end_cam >= start_cam && step_cam > 0.0) {
            return Err(invalid(format!(
                "bad channel grid {start_cam}..{end_cam} step {step_cam}"
            )));
        }
        let count = ((end_cam - start_cam) / step_cam).round() as usize + 1;
        let channels = (0..count)
            .map(|i| {
                let cam = start_cam + i as f64 * step_cam;
                let freq_hz = cam_to_freq(cam);
                Channel { cam, freq_hz, erb_hz: erb_of(freq_hz) }
            })
            .collect();
        Ok(ChannelGrid { start_cam, step_cam, channels })
    }

    /// 1.8 to 38.9 Cam, 372 channels.
    pub fn gammatone() -> Self {
        Self::new(1.8, 38.9, CAM_STEP).expect("valid grid")
    }

    /// 2.6 to 36.9 Cam, 344 channels.
    pub fn gammachirp() -> Self {
        Self::new(2.6, 36.9, CAM_STEP).expect("valid grid")
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn step_cam(&self) -> f64 {
        self.step_cam
    }

    pub fn start_cam(&self) -> f64 {
        self.start_cam
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn channel(&self, k: usize) -> &Channel {
        &self.channels[k]
    }

    pub fn cams(&self) -> impl Iterator<Item = f64> + '_ {
        self.channels.iter().map(|c| c.cam)
    }

    pub fn freqs(&self) -> impl Iterator<Item = f64> + '_ {
        self.channels.iter().map(|c| c.freq_hz)
    }

    /// Index of the channel whose centre frequency is closest to `f_hz`.
    pub fn nearest(&self, f_hz: f64) -> usize {
        self.channels
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1.freq_hz - f_hz).abs().total_cmp(&(b.1.freq_hz - f_hz).abs())
            })
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// `k, cam, f_k, erb_hz, c_k` rows; `c_k` is empty for gammatone banks.
    pub fn to_csv(&self, chirp: Option<&[f64]>) -> String {
        let mut s = String::from("k,cam,f_k,erb_hz,c_k\n");
        for (k, ch) in self.channels.iter().enumerate() {
            let c = chirp.map(|c| format!("{:.6}", c[k])).unwrap_or_default();
            writeln!(s, "{},{:.1},{:.6},{:.6},{}", k + 1, ch.cam, ch.freq_hz, ch.erb_hz, c).unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_grid_sizes() {
        let gt = ChannelGrid::gammatone();
        assert_eq!(gt.len(), 372);
        assert!((gt.channel(0).cam - 1.8).abs() < 1e-12);
        assert!((gt.channel(371).cam - 38.9).abs() < 1e-9);
        let gc = ChannelGrid::gammachirp();
        assert_eq!(gc.len(), 344);
        assert!((gc.channel(343).cam - 36.9).abs() < 1e-9);
    }

    #[test]
    fn frequencies_increase() {
        let g = ChannelGrid::gammatone();
        assert!(g.channels().windows(2).all(|w| w[1].freq_hz > w[0].freq_hz));
        assert!((g.channel(0).freq_hz - cam_to_freq(1.8)).abs() < 1e-12);
        assert_eq!(g.nearest(1000.0), 138); // 15.6 Cam
    }

    #[test]
    fn csv_has_header_and_rows() {
        let g = ChannelGrid::new(10.0, 10.2, 0.1).unwrap();
        let csv = g.to_csv(Some(&[0.0, 1.0, 2.0]));
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("k,cam,f_k,erb_hz,c_k"));
    }
}
