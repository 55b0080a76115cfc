use sqm_core::dsp::Sos;
use sqm_core::erb::{cam_to_freq, erb_of, freq_to_cam};
use sqm_core::filterbank::{chirp_from_level, design_gcfb, design_gcfb_with_chirp, design_gtfb, ChannelGrid};
use sqm_core::stimuli::gen_sine;

const FS: f64 = 44_100.0;

/// Steady-state output amplitude of a filter for a unit sine, measured in time.
fn probe_gain(sos: &Sos, f: f64) -> f64 {
    let x = gen_sine(f, 0.5, 90.9, FS).unwrap();
    let peak = x.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let y = sos.process(x.samples());
    let tail = &y[y.len() / 2..];
    tail.iter().fold(0.0f64, |m, v| m.max(v.abs())) / peak
}

#[test]
fn grids_have_the_expected_size() {
    assert_eq!(ChannelGrid::gammatone().len(), 372);
    assert_eq!(ChannelGrid::gammachirp().len(), 344);
    let g = ChannelGrid::gammatone();
    assert_eq!(g.nearest(1000.0), 138);
    for w in g.channels().windows(2) {
        assert!((w[1].cam - w[0].cam - 0.1).abs() < 1e-9);
    }
}

#[test]
fn erb_scale_round_trips() {
    for f in [50.0, 440.0, 1000.0, 8000.0, 18_000.0] {
        assert!((cam_to_freq(freq_to_cam(f)) - f).abs() < 1e-9 * f);
    }
    assert!((erb_of(1000.0) - 132.639).abs() < 1e-3);
}

#[test]
fn time_domain_probe_matches_unity_gain() {
    let grid = ChannelGrid::gammatone();
    let fb = design_gtfb(&grid, FS).unwrap();
    for k in [20, 138, 250, 330] {
        let f = grid.channel(k).freq_hz;
        let g = probe_gain(fb.filter(k), f);
        assert!((20.0 * g.log10()).abs() < 0.1, "channel {k} at {f:.0} Hz: {g}");
        let off = probe_gain(fb.filter(k), f + 3.0 * erb_of(f));
        assert!(off < 0.1, "channel {k} attenuates 3 ERB above: {off}");
    }
}

#[test]
fn gammachirp_skews_with_level() {
    let grid = ChannelGrid::gammachirp();
    let k = grid.nearest(2000.0);
    let f = grid.channel(k).freq_hz;
    let e = erb_of(f);
    let quiet = design_gcfb(&grid, FS, &vec![20.0; grid.len()]).unwrap();
    let loud = design_gcfb(&grid, FS, &vec![80.0; grid.len()]).unwrap();
    // Louder: broader low side, steeper high side.
    let low = |fb: &sqm_core::filterbank::Filterbank| fb.filter(k).magnitude_db(f - 1.5 * e, FS);
    assert!(low(&loud) > low(&quiet) + 3.0);
    assert!(chirp_from_level(80.0) < chirp_from_level(20.0));
    for fb in [&quiet, &loud] {
        assert!(fb.filter(k).magnitude_db(f, FS).abs() < 0.1);
    }
}

#[test]
fn zero_chirp_is_the_gammatone() {
    let grid = ChannelGrid::gammachirp();
    let gc = design_gcfb_with_chirp(&grid, FS, &vec![0.0; grid.len()]).unwrap();
    let gt = design_gtfb(&grid, FS).unwrap();
    for k in (0..grid.len()).step_by(17) {
        let f = grid.channel(k).freq_hz;
        for d in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            let x = f + d * erb_of(f);
            assert!((gt.filter(k).magnitude_db(x, FS) - gc.filter(k).magnitude_db(x, FS)).abs() < 0.2);
        }
    }
}
