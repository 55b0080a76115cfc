//! Evaluation grids: fixed stimulus sets run through both filterbank
//! variants, reported as CSV with per-variant values and grid-normalized
//! columns.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::pipeline::Analyzer;
use crate::signal::CalibratedSignal;
use crate::stimuli::{nb_bandwidth, scale_to_loudness, StimulusKind, StimulusSpec};
use crate::Variant;

pub const ROUGHNESS_DURATION_S: f64 = 0.2;
pub const FLUCTUATION_DURATION_S: f64 = 4.0;
pub const TONE_DURATION_S: f64 = 1.0;
pub const SHARPNESS_TONE_DURATION_S: f64 = 0.5;
pub const NOISE_DURATION_S: f64 = 1.0;
/// Loudness every sharpness-noise stimulus is scaled to.
pub const NOISE_TARGET_SONE: f64 = 4.0;
/// Starting level of noise before loudness scaling.
const NOISE_START_DB: f64 = 60.0;

pub const ROUGH_MOD_FREQS: [f64; 11] = [10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0, 200.0];
pub const FLUCT_MOD_FREQS: [f64; 8] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
pub const NB_CENTERS: [f64; 12] =
    [200.0, 350.0, 500.0, 700.0, 1000.0, 1400.0, 2000.0, 2800.0, 4000.0, 5500.0, 7500.0, 10_000.0];
pub const HP_LOW_EDGES: [f64; 8] = [250.0, 500.0, 1000.0, 2000.0, 3000.0, 4000.0, 6000.0, 8500.0];
pub const LP_HIGH_EDGES: [f64; 8] = [350.0, 600.0, 1000.0, 2000.0, 3500.0, 5000.0, 7500.0, 10_500.0];
pub const SHARPNESS_TONE_FREQS: [f64; 5] = [500.0, 1000.0, 2000.0, 4000.0, 8000.0];
pub const SHARPNESS_TONE_SONES: [f64; 4] = [2.0, 7.0, 14.0, 28.0];
/// FM roughness and fluctuation stimuli.
pub const FM_CARRIER_HZ: f64 = 1500.0;
pub const FM_DEVIATION_HZ: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Grid {
    Table1,
    SharpnessNoise,
    SharpnessLoudness,
    RoughModfreq,
    RoughSpl,
    RoughCarrier,
    RoughDepth,
    FluctModfreq,
    FluctSpl,
    FluctDepth,
}

impl Grid {
    pub const ALL: [Grid; 10] = [
        Grid::Table1,
        Grid::SharpnessNoise,
        Grid::SharpnessLoudness,
        Grid::RoughModfreq,
        Grid::RoughSpl,
        Grid::RoughCarrier,
        Grid::RoughDepth,
        Grid::FluctModfreq,
        Grid::FluctSpl,
        Grid::FluctDepth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Grid::Table1 => "table1",
            Grid::SharpnessNoise => "sharpness-noise",
            Grid::SharpnessLoudness => "sharpness-loudness",
            Grid::RoughModfreq => "rough-modfreq",
            Grid::RoughSpl => "rough-spl",
            Grid::RoughCarrier => "rough-carrier",
            Grid::RoughDepth => "rough-depth",
            Grid::FluctModfreq => "fluct-modfreq",
            Grid::FluctSpl => "fluct-spl",
            Grid::FluctDepth => "fluct-depth",
        }
    }

    pub fn metric(self) -> Metric {
        match self {
            Grid::Table1 => Metric::Loudness,
            Grid::SharpnessNoise | Grid::SharpnessLoudness => Metric::Sharpness,
            Grid::RoughModfreq | Grid::RoughSpl | Grid::RoughCarrier | Grid::RoughDepth => Metric::Roughness,
            Grid::FluctModfreq | Grid::FluctSpl | Grid::FluctDepth => Metric::Fluctuation,
        }
    }

    /// Column names of the stimulus parameters.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Grid::Table1 => &["freq_hz", "spl_db"],
            Grid::SharpnessNoise => &["noise", "center_hz", "low_hz", "high_hz"],
            Grid::SharpnessLoudness => &["freq_hz", "target_sone"],
            Grid::RoughModfreq | Grid::FluctModfreq => &["signal", "mod_freq_hz"],
            Grid::RoughSpl | Grid::FluctSpl => &["signal", "spl_db"],
            Grid::RoughCarrier => &["carrier_hz", "mod_freq_hz"],
            Grid::RoughDepth | Grid::FluctDepth => &["depth"],
        }
    }

    /// Stimuli of the grid in their fixed order.
    pub fn points(self, seed: u64) -> Vec<GridPoint> {
        let am = |c: f64, fm: f64, depth: f64| StimulusKind::Am { carrier_hz: c, mod_freq_hz: fm, depth };
        let fm = |fm: f64| StimulusKind::Fm { carrier_hz: FM_CARRIER_HZ, mod_freq_hz: fm, deviation_hz: FM_DEVIATION_HZ };
        let point = |params: Vec<String>, kind, dur, level| GridPoint {
            params,
            spec: StimulusSpec::new(kind, dur, level),
            target_sone: None,
        };
        let mut out = Vec::new();
        match self {
            Grid::Table1 => {
                let sine = |f: f64| StimulusKind::Sine { freq_hz: f };
                out.push(point(vec![fmt(100.0), fmt(50.0)], sine(100.0), TONE_DURATION_S, 50.0));
                for spl in (20..=80).step_by(10) {
                    out.push(point(vec![fmt(1000.0), fmt(spl as f64)], sine(1000.0), TONE_DURATION_S, spl as f64));
                }
                for spl in (20..=80).step_by(20) {
                    out.push(point(vec![fmt(3000.0), fmt(spl as f64)], sine(3000.0), TONE_DURATION_S, spl as f64));
                }
            }
            Grid::SharpnessNoise => {
                let mut noise = |name: &str, kind: StimulusKind| {
                    let spec = StimulusSpec::new(kind, NOISE_DURATION_S, NOISE_START_DB);
                    let (lo, hi) = spec.band_edges().expect("noise has band edges");
                    let center = match kind {
                        StimulusKind::NbNoise { center_hz, .. } => fmt(center_hz),
                        _ => String::new(),
                    };
                    out.push(GridPoint {
                        params: vec![name.to_string(), center, fmt(lo), fmt(hi)],
                        spec,
                        target_sone: Some(NOISE_TARGET_SONE),
                    });
                };
                for c in NB_CENTERS {
                    noise("nb", StimulusKind::NbNoise { center_hz: c, bandwidth_hz: nb_bandwidth(c), seed });
                }
                for lo in HP_LOW_EDGES {
                    noise("hp", StimulusKind::HpNoise { low_cut_hz: lo, seed });
                }
                for hi in LP_HIGH_EDGES {
                    noise("lp", StimulusKind::LpNoise { high_cut_hz: hi, seed });
                }
            }
            Grid::SharpnessLoudness => {
                for f in SHARPNESS_TONE_FREQS {
                    for n in SHARPNESS_TONE_SONES {
                        out.push(GridPoint {
                            params: vec![fmt(f), fmt(n)],
                            spec: StimulusSpec::new(StimulusKind::Sine { freq_hz: f }, SHARPNESS_TONE_DURATION_S, 60.0),
                            target_sone: Some(n),
                        });
                    }
                }
            }
            Grid::RoughModfreq => {
                for f in ROUGH_MOD_FREQS {
                    out.push(point(vec!["am".into(), fmt(f)], am(1000.0, f, 1.0), ROUGHNESS_DURATION_S, 70.0));
                }
                for f in ROUGH_MOD_FREQS {
                    out.push(point(vec!["fm".into(), fmt(f)], fm(f), ROUGHNESS_DURATION_S, 70.0));
                }
            }
            Grid::RoughSpl => {
                for spl in [40.0, 50.0, 60.0, 70.0, 80.0] {
                    out.push(point(vec!["am".into(), fmt(spl)], am(1000.0, 70.0, 1.0), ROUGHNESS_DURATION_S, spl));
                }
                for spl in [40.0, 50.0, 60.0, 70.0, 80.0] {
                    out.push(point(vec!["fm".into(), fmt(spl)], fm(70.0), ROUGHNESS_DURATION_S, spl));
                }
            }
            Grid::RoughCarrier => {
                for c in [1000.0, 2000.0, 4000.0, 8000.0] {
                    for f in ROUGH_MOD_FREQS {
                        out.push(point(vec![fmt(c), fmt(f)], am(c, f, 1.0), ROUGHNESS_DURATION_S, 60.0));
                    }
                }
            }
            Grid::RoughDepth => {
                for i in 0..=10 {
                    let d = i as f64 / 10.0;
                    out.push(point(vec![fmt(d)], am(1000.0, 70.0, d), ROUGHNESS_DURATION_S, 60.0));
                }
            }
            Grid::FluctModfreq => {
                for f in FLUCT_MOD_FREQS {
                    out.push(point(vec!["am".into(), fmt(f)], am(1000.0, f, 1.0), FLUCTUATION_DURATION_S, 70.0));
                }
                for f in FLUCT_MOD_FREQS {
                    out.push(point(vec!["fm".into(), fmt(f)], fm(f), FLUCTUATION_DURATION_S, 70.0));
                }
            }
            Grid::FluctSpl => {
                for spl in [50.0, 60.0, 70.0, 80.0] {
                    out.push(point(vec!["am".into(), fmt(spl)], am(1000.0, 4.0, 1.0), FLUCTUATION_DURATION_S, spl));
                }
            }
            Grid::FluctDepth => {
                for i in 0..=10 {
                    let d = i as f64 / 10.0;
                    out.push(point(vec![fmt(d)], am(1000.0, 4.0, d), FLUCTUATION_DURATION_S, 70.0));
                }
            }
        }
        out
    }
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Grid::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Unknown { kind: "grid", name: s.to_string() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Loudness,
    Sharpness,
    Roughness,
    Fluctuation,
}

impl Metric {
    pub fn unit(self) -> &'static str {
        match self {
            Metric::Loudness => "sone",
            Metric::Sharpness => "acum",
            Metric::Roughness => "asper",
            Metric::Fluctuation => "vacil",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Loudness => "loudness",
            Metric::Sharpness => "sharpness",
            Metric::Roughness => "roughness",
            Metric::Fluctuation => "fluctuation",
        }
    }

    /// Time-averaged metric of `signal`.
    pub fn evaluate(self, analyzer: &Analyzer, signal: &CalibratedSignal) -> Result<f64> {
        match self {
            Metric::Loudness => Ok(analyzer.loudness(signal)?.mean()),
            Metric::Sharpness => Ok(analyzer.sharpness(signal)?.mean()),
            Metric::Roughness => Ok(analyzer.roughness(signal)?.value()),
            Metric::Fluctuation => Ok(analyzer.fluctuation(signal)?.value()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub params: Vec<String>,
    pub spec: StimulusSpec,
    /// Loudness the stimulus is scaled to before evaluation.
    pub target_sone: Option<f64>,
}

impl GridPoint {
    /// The stimulus as evaluated by `analyzer` (loudness-scaled if the
    /// point has a target).
    pub fn signal(&self, analyzer: &Analyzer) -> Result<CalibratedSignal> {
        let raw = self.spec.with_sample_rate(analyzer.sample_rate()).generate()?;
        match self.target_sone {
            Some(n) => scale_to_loudness(&raw, n, |s| Ok(analyzer.loudness(s)?.mean())),
            None => Ok(raw),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub params: Vec<String>,
    pub gt_value: f64,
    pub gc_value: f64,
    pub gt_norm: f64,
    pub gc_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    pub grid: &'static str,
    pub metric: Metric,
    pub unit: &'static str,
    pub param_names: Vec<&'static str>,
    pub rows: Vec<GridRow>,
}

impl GridResult {
    pub fn to_csv(&self) -> String {
        let mut s = self.param_names.join(",");
        s.push_str(",gt_value,gc_value,gt_norm,gc_norm\n");
        for r in &self.rows {
            for p in &r.params {
                s.push_str(p);
                s.push(',');
            }
            s.push_str(&format!("{:.9},{:.9},{:.6},{:.6}\n", r.gt_value, r.gc_value, r.gt_norm, r.gc_norm));
        }
        s
    }

    /// Values of one variant in row order.
    pub fn values(&self, variant: Variant) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| match variant {
                Variant::Gammatone => r.gt_value,
                Variant::Gammachirp => r.gc_value,
            })
            .collect()
    }

    /// Rows whose first parameter equals `first`.
    pub fn rows_where(&self, first: &str) -> Vec<&GridRow> {
        self.rows.iter().filter(|r| r.params.first().map(String::as_str) == Some(first)).collect()
    }
}

/// Normalizes by the maximum; all-zero input stays zero.
pub fn normalize(values: &[f64]) -> Vec<f64> {
    let max = values.iter().cloned().fold(0.0, f64::max);
    values.iter().map(|v| if max > 0.0 { v / max } else { 0.0 }).collect()
}

/// Gammatone and gammachirp analyzers evaluated side by side.
#[derive(Debug)]
pub struct Evaluator {
    gt: Analyzer,
    gc: Analyzer,
    execution: Execution,
}

impl Evaluator {
    pub fn new(gt: Analyzer, gc: Analyzer) -> Result<Self> {
        if gt.variant() != Variant::Gammatone || gc.variant() != Variant::Gammachirp {
            return Err(crate::error::invalid("evaluator needs a gammatone and a gammachirp analyzer"));
        }
        let execution = gt.execution();
        Ok(Evaluator { gt, gc, execution })
    }

    pub fn standard(execution: Execution) -> Result<Self> {
        let make = |v| Analyzer::new(crate::AnalyzerConfig::new(v).with_execution(execution));
        Self::new(make(Variant::Gammatone)?, make(Variant::Gammachirp)?)
    }

    pub fn analyzer(&self, variant: Variant) -> &Analyzer {
        match variant {
            Variant::Gammatone => &self.gt,
            Variant::Gammachirp => &self.gc,
        }
    }

    pub fn evaluate_point(&self, variant: Variant, metric: Metric, point: &GridPoint) -> Result<f64> {
        let a = self.analyzer(variant);
        metric.evaluate(a, &point.signal(a)?)
    }

    pub fn evaluate(&self, grid: Grid, seed: u64) -> Result<GridResult> {
        let metric = grid.metric();
        let points = grid.points(seed);
        // Modulation metrics need the sone/phon map; build it before fanning out.
        if matches!(metric, Metric::Roughness | Metric::Fluctuation) {
            self.gt.sone_phon()?;
            self.gc.sone_phon()?;
        }
        let values = self.execution.try_map_range(points.len() * 2, |i| {
            let variant = Variant::ALL[i % 2];
            self.evaluate_point(variant, metric, &points[i / 2])
        })?;
        let gt: Vec<f64> = values.iter().step_by(2).copied().collect();
        let gc: Vec<f64> = values.iter().skip(1).step_by(2).copied().collect();
        let (gt_norm, gc_norm) = (normalize(&gt), normalize(&gc));
        let rows = points
            .into_iter()
            .enumerate()
            .map(|(i, p)| GridRow {
                params: p.params,
                gt_value: gt[i],
                gc_value: gc[i],
                gt_norm: gt_norm[i],
                gc_norm: gc_norm[i],
            })
            .collect();
        Ok(GridResult {
            grid: grid.name(),
            metric,
            unit: metric.unit(),
            param_names: grid.param_names().to_vec(),
            rows,
        })
    }
}
