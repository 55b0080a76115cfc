use sqm_core::stimuli::{gen_sine, StimulusKind, StimulusSpec};
use sqm_core::{Analyzer, CalibratedSignal, Variant};

const FS: f64 = 44_100.0;

fn sone(a: &Analyzer, s: &CalibratedSignal) -> f64 {
    a.loudness(s).unwrap().mean()
}

#[test]
fn one_kilohertz_at_forty_decibels_is_about_one_sone() {
    for v in Variant::ALL {
        let a = Analyzer::for_variant(v).unwrap();
        let n = sone(&a, &gen_sine(1000.0, 1.0, 40.0, FS).unwrap());
        assert!((0.8..1.2).contains(&n), "{v}: {n}");
    }
}

#[test]
fn loudness_grows_with_level_and_silence_is_zero() {
    let a = Analyzer::for_variant(Variant::Gammatone).unwrap();
    let mut last = 0.0;
    for db in [10.0, 30.0, 50.0, 70.0, 90.0] {
        let n = sone(&a, &gen_sine(1000.0, 0.5, db, FS).unwrap());
        assert!(n > last, "{db} dB: {n} <= {last}");
        last = n;
    }
    let silent = CalibratedSignal::silence(22_050, FS).unwrap();
    assert_eq!(sone(&a, &silent), 0.0);
}

#[test]
fn low_tones_are_quieter_than_mid_tones_at_equal_level() {
    let a = Analyzer::for_variant(Variant::Gammatone).unwrap();
    let low = sone(&a, &gen_sine(100.0, 0.5, 50.0, FS).unwrap());
    let mid = sone(&a, &gen_sine(1000.0, 0.5, 50.0, FS).unwrap());
    assert!(low < 0.7 * mid, "{low} vs {mid}");
}

#[test]
fn broadband_noise_is_louder_than_a_tone_of_equal_level() {
    let a = Analyzer::for_variant(Variant::Gammatone).unwrap();
    let tone = sone(&a, &gen_sine(1000.0, 0.5, 60.0, FS).unwrap());
    let noise = StimulusSpec::new(StimulusKind::HpNoise { low_cut_hz: 200.0, seed: 3 }, 0.5, 60.0).generate().unwrap();
    assert!(sone(&a, &noise) > 1.5 * tone);
}

#[test]
fn specific_loudness_peaks_near_the_tone() {
    let a = Analyzer::for_variant(Variant::Gammatone).unwrap();
    let r = a.loudness(&gen_sine(2000.0, 0.5, 60.0, FS).unwrap()).unwrap();
    let spec = r.specific_mean();
    let k = (0..spec.len()).max_by(|&i, &j| spec[i].total_cmp(&spec[j])).unwrap();
    let f = a.grid().channel(k).freq_hz;
    assert!((1800.0..2300.0).contains(&f), "peak at {f:.0} Hz");
    let total = 0.1 * spec.iter().sum::<f64>();
    assert!((total - r.mean()).abs() < 1e-9 * total.max(1.0));
}
