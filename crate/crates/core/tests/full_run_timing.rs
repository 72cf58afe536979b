use schreierlab_core::config::RunConfig;
use schreierlab_core::verify::run_all;

#[test]
#[ignore]
fn timing_probe() {
    let cfg = RunConfig::default();
    let results = run_all(&cfg).unwrap();
    for r in &results {
        println!(
            "{:32} {:6} instances {:3} failures {:3} skipped {:8} ms",
            r.id,
            r.instances,
            r.failures.len(),
            r.skipped.len(),
            r.wall_ms
        );
        for f in r.failures.iter().take(3) {
            println!(
                "  FAIL {} :: {} :: observed {} :: required {}",
                f.instance, f.replay, f.observed, f.required
            );
        }
    }
}
