//! Per-channel time series on a channel grid.

use std::fmt::Write;

use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::filterbank::ChannelGrid;

/// Analysis window that skips the filter warm-up at the start of a signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SteadyWindow {
    pub start: usize,
    pub end: usize,
}

impl SteadyWindow {
    /// Skips `warmup_s` seconds, but never more than half of the signal.
    pub fn new(len: usize, sample_rate: f64, warmup_s: f64) -> Self {
        let skip = ((warmup_s * sample_rate).round().max(0.0) as usize).min(len / 2);
        SteadyWindow { start: skip, end: len }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn slice<'a>(&self, x: &'a [f64]) -> &'a [f64] {
        &x[self.start..self.end]
    }

    pub fn mean(&self, x: &[f64]) -> f64 {
        let s = self.slice(x);
        if s.is_empty() {
            0.0
        } else {
            s.iter().sum::<f64>() / s.len() as f64
        }
    }
}

/// K equal-length time series, one per grid channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelBank {
    grid: ChannelGrid,
    sample_rate: f64,
    data: Vec<Vec<f64>>,
}

impl ChannelBank {
    pub fn new(grid: ChannelGrid, sample_rate: f64, data: Vec<Vec<f64>>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(invalid(format!(
                "bank has {} channels but grid has {}",
                data.len(),
                grid.len()
            )));
        }
        if let Some(first) = data.first() {
            if data.iter().any(|c| c.len() != first.len()) {
                return Err(invalid("bank channels differ in length"));
            }
        }
        if !(sample_rate > 0.0) {
            return Err(invalid("bank sample rate must be positive"));
        }
        Ok(ChannelBank { grid, sample_rate, data })
    }

    pub fn grid(&self) -> &ChannelGrid {
        &self.grid
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn num_channels(&self) -> usize {
        self.data.len()
    }

    pub fn num_samples(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }

    pub fn channel(&self, k: usize) -> &[f64] {
        &self.data[k]
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.data
    }

    pub fn into_channels(self) -> Vec<Vec<f64>> {
        self.data
    }

    /// Applies `f` to every channel, keeping grid and rate.
    pub fn map_channels<F>(&self, exec: Execution, f: F) -> ChannelBank
    where
        F: Fn(usize, &[f64]) -> Vec<f64> + Sync + Send,
    {
        let data = exec.map_range(self.data.len(), |k| f(k, &self.data[k]));
        ChannelBank { grid: self.grid.clone(), sample_rate: self.sample_rate, data }
    }

    /// Same bank at a new rate (after the caller resampled every channel).
    pub fn with_data(&self, sample_rate: f64, data: Vec<Vec<f64>>) -> Result<ChannelBank> {
        ChannelBank::new(self.grid.clone(), sample_rate, data)
    }

    pub fn window(&self, warmup_s: f64) -> SteadyWindow {
        SteadyWindow::new(self.num_samples(), self.sample_rate, warmup_s)
    }

    /// Per-channel mean over a window.
    pub fn channel_means(&self, window: SteadyWindow) -> Vec<f64> {
        self.data.iter().map(|c| window.mean(c)).collect()
    }

    /// Long-format `t,k,value` CSV (k is 1-based).
    pub fn to_csv_long(&self) -> String {
        let mut s = String::from("t,k,value\n");
        for n in 0..self.num_samples() {
            let t = n as f64 / self.sample_rate;
            for (k, c) in self.data.iter().enumerate() {
                writeln!(s, "{:.6},{},{:.9e}", t, k + 1, c[n]).unwrap();
            }
        }
        s
    }

    /// `k,cam,value` CSV of per-channel values (e.g. window means).
    pub fn values_csv(grid: &ChannelGrid, header: &str, values: &[f64]) -> String {
        let mut s = format!("k,cam,{header}\n");
        for (k, (ch, v)) in grid.channels().iter().zip(values).enumerate() {
            writeln!(s, "{},{:.1},{:.9e}", k + 1, ch.cam, v).unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_never_exceeds_half() {
        let w = SteadyWindow::new(8820, 44_100.0, 0.2);
        assert_eq!(w.start, 4410);
        let w = SteadyWindow::new(44_100, 44_100.0, 0.2);
        assert_eq!(w.start, 8820);
        assert_eq!(w.len(), 44_100 - 8820);
    }

    #[test]
    fn rejects_ragged() {
        let g = ChannelGrid::new(10.0, 10.1, 0.1).unwrap();
        assert!(ChannelBank::new(g.clone(), 100.0, vec![vec![0.0; 3], vec![0.0; 4]]).is_err());
        assert!(ChannelBank::new(g, 100.0, vec![vec![0.0; 3]]).is_err());
    }
}
