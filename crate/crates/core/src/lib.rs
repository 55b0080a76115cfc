//! Time-domain psychoacoustic metrics on an auditory filterbank: loudness,
//! sharpness, roughness and fluctuation strength, with the stimulus
//! generators and evaluation grids used to exercise them.

pub mod audio;
pub mod bank;
pub mod dsp;
pub mod earfilter;
pub mod erb;
pub mod error;
pub mod eval;
pub mod exec;
pub mod filterbank;
pub mod fluctuation;
pub mod loudness;
pub mod modulation;
pub mod pipeline;
pub mod roughness;
pub mod series;
pub mod sharpness;
pub mod signal;
pub mod stimuli;
pub mod tables;

use std::fmt;
use std::str::FromStr;

pub use error::{Error, Result};
pub use exec::Execution;
pub use pipeline::{Analyzer, AnalyzerConfig};
pub use signal::CalibratedSignal;

/// Auditory filterbank behind the loudness stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Gammatone,
    Gammachirp,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::Gammatone, Variant::Gammachirp];

    pub fn short_name(self) -> &'static str {
        match self {
            Variant::Gammatone => "gt",
            Variant::Gammachirp => "gc",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gt" | "gammatone" => Ok(Variant::Gammatone),
            "gc" | "gammachirp" => Ok(Variant::Gammachirp),
            _ => Err(Error::Unknown { kind: "filterbank", name: s.to_string() }),
        }
    }
}
