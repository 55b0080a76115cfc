use sqm_core::stimuli::gen_am;
use sqm_core::{Analyzer, AnalyzerConfig, Execution, Variant};

#[test]
fn sequential_and_parallel_runs_are_identical() {
    let x = gen_am(1000.0, 70.0, 1.0, 0.2, 60.0, 44_100.0).unwrap();
    for v in Variant::ALL {
        let run = |exec| {
            let a = Analyzer::new(AnalyzerConfig::new(v).with_execution(exec)).unwrap();
            let l = a.loudness(&x).unwrap();
            let r = a.roughness_of(&l).unwrap();
            (l.total().to_vec(), r.value(), r.specific().to_vec())
        };
        assert_eq!(run(Execution::Sequential), run(Execution::Parallel), "{v}");
    }
}
