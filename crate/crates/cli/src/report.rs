use std::fmt::Write as _;

use anyhow::{bail, Result};
use clap::ValueEnum;
use serde_json::json;

use sqm_core::bank::{ChannelBank, SteadyWindow};
use sqm_core::eval::Metric;
use sqm_core::modulation::ModulationBand;
use sqm_core::{Analyzer, CalibratedSignal};

use crate::{Band, Format, MetricArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DumpStage {
    /// Channel grid: k, cam, f_k, ERB, chirp.
    Grid,
    /// Full-rate filterbank outputs.
    Channels,
    /// Full-rate excitation relative to the reference.
    Excitation,
    SpecificLoudness,
    /// DC-free, band-passed specific loudness.
    Bandpassed,
    /// Low-passed Hilbert envelopes of the band-passed channels.
    Envelopes,
    /// Normalized cross-correlation between channels k and k+10.
    Correlations,
}

impl DumpStage {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    /// `t,k,value` rows.
    Long,
    /// `k,cam,value` rows: steady-window rms for channels, mean otherwise.
    Summary,
}

struct Computed {
    value: f64,
    series: (Vec<f64>, f64),
    specific: Option<Vec<f64>>,
}

fn compute(analyzer: &Analyzer, metric: Metric, signal: &CalibratedSignal) -> Result<Computed> {
    let loud = analyzer.loudness(signal)?;
    Ok(match metric {
        Metric::Loudness => Computed {
            value: loud.mean(),
            series: (loud.total().to_vec(), loud.sample_rate()),
            specific: Some(loud.specific_mean()),
        },
        Metric::Sharpness => {
            let s = sqm_core::sharpness::sharpness(&loud, &analyzer.config().sharpness)?;
            Computed { value: s.mean(), series: (s.values().to_vec(), s.sample_rate()), specific: None }
        }
        Metric::Roughness | Metric::Fluctuation => {
            let m = if metric == Metric::Roughness { analyzer.roughness_of(&loud)? } else { analyzer.fluctuation_of(&loud)? };
            Computed {
                value: m.value(),
                series: (m.series().values().to_vec(), m.series().sample_rate()),
                specific: Some(m.specific().to_vec()),
            }
        }
    })
}

pub fn metric_report(
    analyzer: &Analyzer,
    metric: Metric,
    signal: &CalibratedSignal,
    args: &MetricArgs,
    format: Format,
) -> Result<String> {
    let c = compute(analyzer, metric, signal)?;
    let fb = analyzer.variant().short_name();
    if args.specific && c.specific.is_none() {
        bail!("{} has no per-channel values", metric.name());
    }
    let cams: Vec<f64> = analyzer.grid().cams().collect();
    Ok(match format {
        Format::Csv if args.series => {
            let mut s = format!("t,{}\n", metric.name());
            for (i, v) in c.series.0.iter().enumerate() {
                writeln!(s, "{:.6},{:.9}", i as f64 / c.series.1, v)?;
            }
            s
        }
        Format::Csv if args.specific => {
            ChannelBank::values_csv(analyzer.grid(), metric.name(), c.specific.as_deref().expect("checked above"))
        }
        Format::Csv => format!("metric,filterbank,value,unit\n{},{fb},{:.9},{}\n", metric.name(), c.value, metric.unit()),
        Format::Json => {
            let mut obj = json!({
                "metric": metric.name(),
                "filterbank": fb,
                "value": c.value,
                "unit": metric.unit(),
            });
            if args.series {
                obj["series"] = json!({ "sample_rate": c.series.1, "values": c.series.0 });
            }
            if args.specific {
                obj["specific"] = json!({ "cam": cams, "values": c.specific });
            }
            serde_json::to_string_pretty(&obj)? + "\n"
        }
    })
}

fn bank_csv(bank: &ChannelBank, layout: Layout, rms: bool, warmup_s: f64) -> String {
    match layout {
        Layout::Long => bank.to_csv_long(),
        Layout::Summary => {
            let w = bank.window(warmup_s);
            let values: Vec<f64> = bank
                .channels()
                .iter()
                .map(|c| if rms { w.mean(&c.iter().map(|v| v * v).collect::<Vec<_>>()).sqrt() } else { w.mean(c) })
                .collect();
            ChannelBank::values_csv(bank.grid(), if rms { "rms" } else { "mean" }, &values)
        }
    }
}

pub fn dump(analyzer: &Analyzer, stage: DumpStage, signal: &CalibratedSignal, band: Band, layout: Layout) -> Result<String> {
    let warmup = analyzer.config().warmup_s;
    let band = match band {
        Band::Roughness => ModulationBand::Roughness,
        Band::Fluctuation => ModulationBand::Fluctuation,
    };
    Ok(match stage {
        DumpStage::Grid => {
            let ear = analyzer.ear_filter(signal)?;
            let fb = analyzer.filterbank(&ear)?;
            analyzer.grid().to_csv(fb.chirp())
        }
        DumpStage::Channels => bank_csv(&analyzer.channel_bank(signal)?, layout, true, warmup),
        DumpStage::Excitation => bank_csv(&analyzer.excitation_bank(signal)?, layout, false, warmup),
        DumpStage::SpecificLoudness => bank_csv(analyzer.loudness(signal)?.specific(), layout, false, warmup),
        DumpStage::Bandpassed | DumpStage::Envelopes => {
            let m = analyzer.modulation(&analyzer.loudness(signal)?, band)?;
            let data = if stage == DumpStage::Bandpassed { m.bandpassed } else { m.envelopes };
            let bank = ChannelBank::new(analyzer.grid().clone(), m.sample_rate, data)?;
            match layout {
                Layout::Long => bank.to_csv_long(),
                // The modulation stages already cover only the steady window.
                Layout::Summary => {
                    let all = SteadyWindow { start: 0, end: bank.num_samples() };
                    let rms = stage == DumpStage::Bandpassed;
                    let values: Vec<f64> = bank
                        .channels()
                        .iter()
                        .map(|c| if rms { all.mean(&c.iter().map(|v| v * v).collect::<Vec<_>>()).sqrt() } else { all.mean(c) })
                        .collect();
                    ChannelBank::values_csv(bank.grid(), if rms { "rms" } else { "mean" }, &values)
                }
            }
        }
        DumpStage::Correlations => {
            let m = analyzer.modulation(&analyzer.loudness(signal)?, band)?;
            let mut s = String::from("k,cam,i\n");
            for (k, (ch, i)) in analyzer.grid().channels().iter().zip(&m.pairs).enumerate() {
                writeln!(s, "{},{:.1},{:.9}", k + 1, ch.cam, i)?;
            }
            s
        }
    })
}
