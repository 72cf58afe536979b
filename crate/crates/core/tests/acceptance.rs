//! Acceptance suite: every headline requirement as one pass/fail line.
//!
//! Run with `cargo test -p schreierlab-core --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use schreierlab_core::averages::construction_stats;
use schreierlab_core::config::RunConfig;
use schreierlab_core::verify::{canonical_json, run_all, suite_ids, SuiteResult};

struct Gate {
    lines: Vec<(String, bool, String)>,
}

impl Gate {
    fn new() -> Self {
        Gate { lines: Vec::new() }
    }

    fn record(&mut self, id: &str, ok: bool, detail: String) {
        self.lines.push((id.to_string(), ok, detail));
    }

    fn suite(&mut self, id: &str, results: &[SuiteResult], suite: &str, extra: &str) {
        let r = results.iter().find(|r| r.id == suite).expect("suite ran");
        let ok = r.passed();
        let detail = if ok {
            format!(
                "{} instances, {} skipped{extra}",
                r.instances,
                r.skipped.len()
            )
        } else {
            format!(
                "{} failures of {} instances; first: {}",
                r.failures.len(),
                r.instances,
                r.failures[0].instance
            )
        };
        self.record(id, ok, detail);
    }

    fn finish(self) {
        let mut all_ok = true;
        for (id, ok, detail) in &self.lines {
            println!("{} {:55} {}", if *ok { "PASS" } else { "FAIL" }, id, detail);
            all_ok &= ok;
        }
        assert!(all_ok, "acceptance criteria failed");
    }
}

fn wall(results: &[SuiteResult], suite: &str) -> u64 {
    results
        .iter()
        .find(|r| r.id == suite)
        .map(|r| r.wall_ms)
        .unwrap_or(u64::MAX)
}

#[test]
fn acceptance() {
    let cfg = RunConfig::default();
    let results = run_all(&cfg).expect("verify runs");
    assert_eq!(results.len(), suite_ids().len());
    let mut gate = Gate::new();

    // 1. Membership oracle equivalence over the full small universe, under
    //    a runtime ceiling.
    {
        let ms = wall(&results, "schreier-oracle");
        let r = results.iter().find(|r| r.id == "schreier-oracle").unwrap();
        let ok = r.passed() && r.instances == 2 * 4096 && ms < 10_000;
        gate.record(
            "1 membership-oracle-equivalence",
            ok,
            format!("{} instances in {} ms (< 10 s)", r.instances, ms),
        );
    }

    // 2. Block-sum bound: 500 random instances per order, exact rationals.
    {
        let r = results.iter().find(|r| r.id == "block-sum-bound").unwrap();
        let ok = r.passed() && r.instances >= 1000;
        gate.record(
            "2 block-sum-bound-500x2",
            ok,
            format!("{} instances, {} failures", r.instances, r.failures.len()),
        );
    }

    // 3. Average weight properties on every construction.
    {
        let r = results
            .iter()
            .find(|r| r.id == "average-properties")
            .unwrap();
        let (verified, rejected) = construction_stats();
        let ok = r.passed() && rejected == 0 && verified > 0;
        gate.record(
            "3 average-properties-every-construction",
            ok,
            format!("{verified} averages verified on construction, {rejected} rejected"),
        );
    }

    // 4. Packing-versus-shift and shift-halving, exhaustive.
    {
        let a = results.iter().find(|r| r.id == "packing-vs-shift").unwrap();
        let b = results.iter().find(|r| r.id == "shift-halving").unwrap();
        let ok = a.passed() && b.passed() && b.instances == 128;
        gate.record(
            "4 packing-and-halving-exhaustive",
            ok,
            format!("{} + {} instances", a.instances, b.instances),
        );
    }

    // 5. Gauge suite on the reference desk profile plus the full-scale
    //    growth-function facts.
    {
        let g = results.iter().find(|r| r.id == "gauge-properties").unwrap();
        let q = results
            .iter()
            .find(|r| r.id == "theta-quartic-bound")
            .unwrap();
        let m = results
            .iter()
            .find(|r| r.id == "theta-ratio-monotone")
            .unwrap();
        let ok = g.passed() && q.passed() && m.passed() && q.instances == 61;
        gate.record(
            "5 gauge-desk-profile-and-growth-function",
            ok,
            format!(
                "{} breakpoint checks, {} quartic, {} ratio instances",
                g.instances, q.instances, m.instances
            ),
        );
    }

    // 6. Indicator sandwich: 60 random sets, all four seminorms bounded.
    gate.suite(
        "6 indicator-seminorm-sandwich",
        &results,
        "indicator-sandwich",
        "",
    );

    // 7. Democracy divergence witness under a runtime ceiling.
    {
        let ms = wall(&results, "democracy-divergence");
        let r = results
            .iter()
            .find(|r| r.id == "democracy-divergence")
            .unwrap();
        let ok = r.passed() && ms < 60_000;
        gate.record(
            "7 democracy-divergence-witness",
            ok,
            format!(
                "{} checks in {} ms (< 60 s); {}",
                r.instances,
                ms,
                r.notes.join("; ")
            ),
        );
    }

    // 8. Window-block indicator values and bounded member indicators.
    gate.suite(
        "8 window-block-exact-values",
        &results,
        "window-block-growth",
        "",
    );

    // 9. Witness-ladder trend and the alternating window bound.
    gate.suite("9 witness-ladder-trend", &results, "window-ladder", "");

    // 10. Thresholded sums and the greedy-ratio ceiling, both spaces.
    {
        let a = results
            .iter()
            .find(|r| r.id == "thresholded-partial-sums")
            .unwrap();
        let b = results
            .iter()
            .find(|r| r.id == "thresholded-window-sums")
            .unwrap();
        let ok = a.passed() && b.passed();
        gate.record(
            "10 thresholded-sums-and-greedy-ceiling",
            ok,
            format!(
                "{} + {} instances; {} | {}",
                a.instances,
                b.instances,
                a.notes.join("; "),
                b.notes.join("; ")
            ),
        );
    }

    // 11. Lower-order block values in the modified space.
    gate.suite(
        "11 lower-block-values-exact",
        &results,
        "lower-block-democracy",
        "",
    );

    // 12. Determinism: a second full run yields byte-identical canonical
    //     output.
    {
        let again = run_all(&cfg).expect("verify runs twice");
        let j1 = canonical_json(&results);
        let j2 = canonical_json(&again);
        gate.record(
            "12 byte-identical-reruns",
            j1 == j2,
            format!("{} bytes of canonical output", j1.len()),
        );
    }

    gate.finish();
}
