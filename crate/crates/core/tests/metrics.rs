use sqm_core::stimuli::{gen_am, gen_sine};
use sqm_core::roughness::RoughnessParams;
use sqm_core::{Analyzer, Variant};

const FS: f64 = 44_100.0;

#[test]
fn sharpness_rises_with_tone_frequency() {
    let a = Analyzer::for_variant(Variant::Gammatone).unwrap();
    let s = |f| a.sharpness(&gen_sine(f, 0.5, 60.0, FS).unwrap()).unwrap().mean();
    let (low, mid, high) = (s(250.0), s(1000.0), s(6000.0));
    assert!(low < mid && mid < high, "{low} {mid} {high}");
}

#[test]
fn unmodulated_tone_is_smooth() {
    let a = Analyzer::for_variant(Variant::Gammatone).unwrap();
    let tone = gen_sine(1000.0, 0.2, 60.0, FS).unwrap();
    let rough = gen_am(1000.0, 70.0, 1.0, 0.2, 60.0, FS).unwrap();
    let r0 = a.roughness(&tone).unwrap().value();
    let r1 = a.roughness(&rough).unwrap().value();
    assert!((0.7..1.3).contains(&r1), "{r1}");
    assert!(r0 < 0.05 * r1, "{r0} vs {r1}");
}

#[test]
fn roughness_specific_values_scale_to_the_total() {
    let a = Analyzer::for_variant(Variant::Gammatone).unwrap();
    let m = a.roughness(&gen_am(1000.0, 70.0, 1.0, 0.2, 60.0, FS).unwrap()).unwrap();
    let sum = RoughnessParams::for_variant(Variant::Gammatone).q_r * m.specific().iter().sum::<f64>();
    assert!((sum - m.value()).abs() < 1e-9 * m.value());
    assert!(m.specific().iter().all(|v| *v >= 0.0));
}

#[test]
fn fluctuation_prefers_slow_modulation() {
    let a = Analyzer::for_variant(Variant::Gammatone).unwrap();
    let f = |fm| a.fluctuation(&gen_am(1000.0, fm, 1.0, 2.0, 70.0, FS).unwrap()).unwrap().value();
    let (slow, fast) = (f(4.0), f(32.0));
    assert!(slow > 2.0 * fast, "{slow} vs {fast}");
}
