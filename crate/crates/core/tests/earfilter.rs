use sqm_core::earfilter::{EarFilter, EarTransferTable, SoundField};
use sqm_core::stimuli::gen_sine;

const FS: f64 = 44_100.0;

#[test]
fn anchor_frequencies_within_half_a_decibel() {
    let table = EarTransferTable::for_field(SoundField::Free);
    let ear = EarFilter::design(&table, FS).unwrap();
    for f in [1000.0, 12_000.0] {
        let d = ear.gain_db(f) - table.gain_db(f);
        assert!(d.abs() < 0.5, "{f} Hz: {d:.2} dB");
    }
}

#[test]
fn fir_follows_the_table_across_the_band() {
    for field in [SoundField::Free, SoundField::Diffuse, SoundField::Eardrum] {
        let table = EarTransferTable::for_field(field);
        let ear = EarFilter::design(&table, FS).unwrap();
        let mut worst = 0.0f64;
        let mut f = 50.0;
        while f <= 16_000.0 {
            worst = worst.max((ear.gain_db(f) - table.gain_db(f)).abs());
            f *= 2f64.powf(1.0 / 12.0);
        }
        assert!(worst < 1.0, "{field:?}: worst {worst:.2} dB");
    }
}

#[test]
fn applied_filter_scales_a_tone_by_the_table_gain() {
    let table = EarTransferTable::for_field(SoundField::Free);
    let x = gen_sine(3000.0, 0.5, 60.0, FS).unwrap();
    let y = EarFilter::design(&table, FS).unwrap().apply(&x).unwrap();
    let tail = |s: &[f64]| {
        let t = &s[s.len() / 2..];
        (t.iter().map(|v| v * v).sum::<f64>() / t.len() as f64).sqrt()
    };
    let gain = 20.0 * (tail(y.samples()) / tail(x.samples())).log10();
    assert!((gain - table.gain_db(3000.0)).abs() < 0.5, "{gain}");
}

#[test]
fn flat_table_is_transparent() {
    let ear = EarFilter::design(&EarTransferTable::flat(), FS).unwrap();
    for f in [100.0, 1000.0, 10_000.0] {
        assert!(ear.gain_db(f).abs() < 0.1);
    }
}

#[test]
fn low_sample_rates_are_rejected() {
    let table = EarTransferTable::for_field(SoundField::Free);
    assert!(EarFilter::design(&table, 16_000.0).is_err());
}

#[test]
fn table_round_trips_through_text() {
    let table = EarTransferTable::for_field(SoundField::Diffuse);
    assert_eq!(EarTransferTable::parse(&table.to_text()).unwrap(), table);
}
