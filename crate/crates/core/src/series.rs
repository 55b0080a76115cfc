//! Uniformly sampled scalar metric with a steady-state average.

use crate::bank::SteadyWindow;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSeries {
    values: Vec<f64>,
    sample_rate: f64,
    window: SteadyWindow,
    mean: f64,
}

impl MetricSeries {
    /// Averages the finite values inside `window`; NaN marks undefined
    /// samples (e.g. silence).
    pub fn new(values: Vec<f64>, sample_rate: f64, window: SteadyWindow, what: &'static str) -> Result<Self> {
        let (sum, n) = window
            .slice(&values)
            .iter()
            .filter(|v| v.is_finite())
            .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
        if n == 0 {
            return Err(Error::SilentInput(what));
        }
        Ok(MetricSeries { values, sample_rate, window, mean: sum / n as f64 })
    }

    /// A constant series, used for metrics defined only as a time average.
    pub fn constant(value: f64, len: usize, sample_rate: f64, window: SteadyWindow) -> Self {
        MetricSeries { values: vec![value; len], sample_rate, window, mean: value }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn window(&self) -> SteadyWindow {
        self.window
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn to_csv(&self, column: &str) -> String {
        let mut s = format!("t,{column}\n");
        for (i, v) in self.values.iter().enumerate() {
            s.push_str(&format!("{:.6},{:.9}\n", i as f64 / self.sample_rate, v));
        }
        s
    }
}
