//! Specific-loudness parameters: loudness coefficient, exponent offset and
//! the per-channel G / A / α / E_THRQ tables.

use std::path::Path;

use crate::earfilter::{EarTransferTable, SoundField};
use crate::erb::freq_to_cam;
use crate::error::{Error, Result};
use crate::filterbank::ChannelGrid;
use crate::tables::{check_increasing, interp_clamped, parse_rows, read_rows};
use crate::Variant;

/// Excitation (dB re E_0) at absolute threshold for channels at or above 500 Hz.
pub const E_THRQ_MID_DB: f64 = 3.63;
/// Stevens exponent at full cochlear gain.
pub const ALPHA_BASE: f64 = 0.2;
/// Boundary between the mid and high branches in E/E_0.
pub const HIGH_BRANCH_START: f64 = 1e10;

const HIGH_EXPONENT: f64 = 0.2;

/// Free-field threshold of hearing (dB SPL) below 500 Hz.
const THRESHOLD_DB: [(f64, f64); 15] = [
    (20.0, 78.5),
    (25.0, 68.7),
    (31.5, 59.5),
    (40.0, 51.1),
    (50.0, 44.0),
    (63.0, 37.5),
    (80.0, 31.5),
    (100.0, 26.5),
    (125.0, 22.1),
    (160.0, 17.9),
    (200.0, 14.4),
    (250.0, 11.4),
    (315.0, 8.6),
    (400.0, 6.2),
    (500.0, 4.4),
];

/// Exponent and input/output constant against low-level gain G (dB).
const G_DB: [f64; 6] = [-25.0, -20.0, -15.0, -10.0, -5.0, 0.0];
const ALPHA_OF_G: [f64; 6] = [0.267, 0.252, 0.237, 0.223, 0.211, 0.200];
const A_OF_G: [f64; 6] = [15.7, 11.6, 8.7, 6.9, 5.6, 4.62];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoudnessRow {
    pub cam: f64,
    pub g_db: f64,
    pub a: f64,
    pub alpha: f64,
    pub e_thrq_db: f64,
}

/// G, A, α and E_THRQ against ERB-number; linearly interpolated in Cam and
/// held constant beyond the end rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LoudnessTable {
    rows: Vec<LoudnessRow>,
}

impl LoudnessTable {
    /// Threshold-derived table: below 500 Hz the cochlear gain drops by the
    /// rise of the threshold excitation behind the outer and middle ear.
    pub fn standard() -> Self {
        let ear = EarTransferTable::for_field(SoundField::Free);
        let behind_ear = |(f, t): (f64, f64)| t + ear.gain_db(f);
        let ref_db = behind_ear(THRESHOLD_DB[THRESHOLD_DB.len() - 1]);
        let mut rows: Vec<LoudnessRow> = THRESHOLD_DB
            .iter()
            .map(|&(f, t)| {
                let g_db = -(behind_ear((f, t)) - ref_db).max(0.0);
                Self::row_for_gain(freq_to_cam(f), g_db)
            })
            .collect();
        rows.push(Self::row_for_gain(45.0, 0.0));
        LoudnessTable { rows }
    }

    fn row_for_gain(cam: f64, g_db: f64) -> LoudnessRow {
        LoudnessRow {
            cam,
            g_db,
            a: interp_clamped(&G_DB, &A_OF_G, g_db),
            alpha: interp_clamped(&G_DB, &ALPHA_OF_G, g_db),
            e_thrq_db: E_THRQ_MID_DB - g_db,
        }
    }

    /// Parses `cam g_db a alpha e_thrq_db` rows.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_rows(parse_rows(text, 5)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_rows(read_rows(path, 5)?)
    }

    fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        check_increasing(&rows)?;
        let rows: Vec<LoudnessRow> = rows
            .iter()
            .map(|r| LoudnessRow { cam: r[0], g_db: r[1], a: r[2], alpha: r[3], e_thrq_db: r[4] })
            .collect();
        for (i, r) in rows.iter().enumerate() {
            if r.a <= 0.0 || r.alpha <= 0.0 {
                return Err(Error::Table { line: i + 1, msg: "A and alpha must be positive".into() });
            }
        }
        Ok(LoudnessTable { rows })
    }

    pub fn rows(&self) -> &[LoudnessRow] {
        &self.rows
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# cam g_db a alpha e_thrq_db\n");
        for r in &self.rows {
            s.push_str(&format!("{:.4} {:.4} {:.4} {:.4} {:.4}\n", r.cam, r.g_db, r.a, r.alpha, r.e_thrq_db));
        }
        s
    }

    pub fn at(&self, cam: f64) -> LoudnessRow {
        let xs: Vec<f64> = self.rows.iter().map(|r| r.cam).collect();
        let col = |f: fn(&LoudnessRow) -> f64| {
            let ys: Vec<f64> = self.rows.iter().map(f).collect();
            interp_clamped(&xs, &ys, cam)
        };
        LoudnessRow { cam, g_db: col(|r| r.g_db), a: col(|r| r.a), alpha: col(|r| r.alpha), e_thrq_db: col(|r| r.e_thrq_db) }
    }
}

impl Default for LoudnessTable {
    fn default() -> Self {
        Self::standard()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoudnessParams {
    pub q_n: f64,
    pub alpha_offset: f64,
    pub table: LoudnessTable,
}

impl LoudnessParams {
    pub fn for_variant(variant: Variant) -> Self {
        let (q_n, alpha_offset) = match variant {
            Variant::Gammatone => (54.6e-3, 0.049),
            Variant::Gammachirp => (54.8e-3, 0.047),
        };
        LoudnessParams { q_n, alpha_offset, table: LoudnessTable::standard() }
    }

    /// Resolves the tables onto a channel grid.
    pub fn channels(&self, grid: &ChannelGrid) -> Vec<ChannelParams> {
        grid.cams().map(|cam| ChannelParams::new(self.q_n, self.alpha_offset, &self.table.at(cam))).collect()
    }
}

/// Linear-unit parameters of one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub q_n: f64,
    pub g: f64,
    pub a: f64,
    pub alpha: f64,
    pub e_thrq: f64,
    a_pow: f64,
    /// Divisor of the high branch, fixed by continuity at `HIGH_BRANCH_START`.
    pub high_div: f64,
}

impl ChannelParams {
    pub fn new(q_n: f64, alpha_offset: f64, row: &LoudnessRow) -> Self {
        let g = 10f64.powf(row.g_db / 10.0);
        let alpha = row.alpha + alpha_offset;
        let mid_top = (g * HIGH_BRANCH_START + row.a).powf(alpha) - row.a.powf(alpha);
        ChannelParams {
            q_n,
            g,
            a: row.a,
            alpha,
            e_thrq: 10f64.powf(row.e_thrq_db / 10.0),
            a_pow: row.a.powf(alpha),
            high_div: HIGH_BRANCH_START / mid_top.powf(1.0 / HIGH_EXPONENT),
        }
    }

    /// Specific loudness for excitation `e` relative to E_0.
    #[inline]
    pub fn specific(&self, e: f64) -> f64 {
        if e >= HIGH_BRANCH_START {
            return self.q_n * (e / self.high_div).powf(HIGH_EXPONENT);
        }
        let mid = (self.alpha * (self.g * e + self.a).ln()).exp() - self.a_pow;
        if e >= self.e_thrq {
            self.q_n * mid
        } else {
            let r = 2.0 * e / (e + self.e_thrq);
            self.q_n * r * r.sqrt() * mid
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ChannelParams {
        LoudnessParams::for_variant(Variant::Gammatone).channels(&ChannelGrid::gammatone())[138]
    }

    #[test]
    fn default_exponents() {
        let gt = LoudnessParams::for_variant(Variant::Gammatone);
        let gc = LoudnessParams::for_variant(Variant::Gammachirp);
        assert!((ALPHA_BASE + gt.alpha_offset - 0.249).abs() < 1e-12);
        assert!((ALPHA_BASE + gc.alpha_offset - 0.247).abs() < 1e-12);
    }

    #[test]
    fn mid_frequency_rows() {
        let t = LoudnessTable::standard();
        let r = t.at(freq_to_cam(1000.0));
        assert_eq!((r.g_db, r.a, r.alpha), (0.0, 4.62, 0.2));
        assert!((r.e_thrq_db - 3.63).abs() < 1e-12);
        let low = t.at(freq_to_cam(50.0));
        assert!(low.g_db < -15.0 && low.alpha > 0.23 && low.e_thrq_db > 18.0);
    }

    #[test]
    fn gain_falls_monotonically_towards_low_frequencies() {
        let t = LoudnessTable::standard();
        for w in t.rows().windows(2) {
            assert!(w[1].g_db >= w[0].g_db - 1e-12);
        }
    }

    #[test]
    fn zero_excitation_is_silent() {
        assert_eq!(params().specific(0.0), 0.0);
    }

    #[test]
    fn mid_branch_matches_scalar_evaluation() {
        let p = params();
        let e = 1e4;
        let direct = 54.6e-3 * ((1.0 * e + 4.62f64).powf(0.249) - 4.62f64.powf(0.249));
        assert!((p.specific(e) - direct).abs() < 1e-12);
    }

    #[test]
    fn branches_are_continuous() {
        let p = params();
        for edge in [p.e_thrq, HIGH_BRANCH_START] {
            let (lo, hi) = (p.specific(edge * (1.0 - 1e-12)), p.specific(edge));
            assert!(((hi - lo) / hi).abs() < 1e-6, "jump at {edge}: {lo} vs {hi}");
        }
    }

    #[test]
    fn table_text_round_trip() {
        let t = LoudnessTable::standard();
        let back = LoudnessTable::parse(&t.to_text()).unwrap();
        assert_eq!(back.rows().len(), t.rows().len());
        for (a, b) in back.rows().iter().zip(t.rows()) {
            assert!((a.g_db - b.g_db).abs() < 1e-4 && (a.cam - b.cam).abs() < 1e-4);
        }
    }

    #[test]
    fn rejects_non_positive_exponent() {
        assert!(LoudnessTable::parse("10 0 4.62 0 3.63\n").is_err());
    }
}
