use sqm_core::audio::{read_audio, write_audio, WavEncoding, DEFAULT_FULLSCALE_DB};
use sqm_core::stimuli::{gen_am, gen_fm, gen_sine, nb_bandwidth, StimulusKind, StimulusSpec};

const FS: f64 = 44_100.0;

#[test]
fn generators_hit_the_requested_level() {
    let sine = gen_sine(1000.0, 0.5, 63.0, FS).unwrap();
    let am = gen_am(1000.0, 70.0, 1.0, 0.5, 63.0, FS).unwrap();
    let fm = gen_fm(1500.0, 4.0, 700.0, 0.5, 63.0, FS).unwrap();
    for s in [sine, am, fm] {
        assert!((s.spl_db() - 63.0).abs() < 1e-9);
        assert_eq!(s.len(), 22_050);
    }
}

#[test]
fn noises_are_seeded_and_level_calibrated() {
    let spec = |seed| StimulusSpec::new(StimulusKind::NbNoise { center_hz: 1000.0, bandwidth_hz: nb_bandwidth(1000.0), seed }, 0.5, 55.0);
    let a = spec(1).generate().unwrap();
    let b = spec(1).generate().unwrap();
    let c = spec(2).generate().unwrap();
    assert_eq!(a.samples(), b.samples());
    assert_ne!(a.samples(), c.samples());
    assert!((a.spl_db() - 55.0).abs() < 1e-9);
}

#[test]
fn narrow_band_width_grows_with_centre() {
    assert!((nb_bandwidth(200.0) - 104.0).abs() < 1.0);
    assert!((nb_bandwidth(10_000.0) - 2463.0).abs() < 5.0);
    assert!(nb_bandwidth(1000.0) > nb_bandwidth(500.0));
}

#[test]
fn invalid_stimuli_are_rejected() {
    assert!(gen_sine(30_000.0, 0.5, 60.0, FS).is_err());
    assert!(gen_am(1000.0, 4.0, 1.5, 0.5, 60.0, FS).is_err());
    assert!(gen_sine(1000.0, 0.0, 60.0, FS).is_err());
}

#[test]
fn wav_round_trip_preserves_level() {
    let dir = tempfile::tempdir().unwrap();
    let x = gen_sine(1000.0, 0.25, 70.0, FS).unwrap();
    for (enc, tol) in [(WavEncoding::Float32, 1e-4), (WavEncoding::Pcm24, 1e-4), (WavEncoding::Pcm16, 1e-2)] {
        let path = dir.path().join(format!("{enc:?}.wav"));
        write_audio(&path, &x, DEFAULT_FULLSCALE_DB, enc).unwrap();
        let y = read_audio(&path, DEFAULT_FULLSCALE_DB).unwrap();
        assert_eq!(y.len(), x.len());
        assert_eq!(y.sample_rate(), FS);
        assert!((y.spl_db() - 70.0).abs() < tol, "{enc:?}: {}", y.spl_db());
    }
}

#[test]
fn missing_audio_names_the_path() {
    let err = read_audio(std::path::Path::new("/no/such/file.wav"), DEFAULT_FULLSCALE_DB).unwrap_err();
    assert!(err.to_string().contains("/no/such/file.wav"), "{err}");
}
