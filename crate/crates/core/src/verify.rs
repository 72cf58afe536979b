//! One-to-one checker suites binding every quantitative statement to an
//! executable instance family.
//!
//! Each suite runs a mapped family of instances and reports zero-failure
//! pass/fail with replayable failure records. Instances that cannot run at
//! desk scale are recorded as skipped with a reason, never as a pass. The
//! canonical JSON report excludes wall-clock timing so that identical
//! configurations produce byte-identical output.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::averages::{averages_along, block_sum, construction_stats, repeated_average};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::gauge::{desk_profile, theta_eval, ConstraintStatus};
use crate::greedy::{democracy_scan, qg_scan, uncond_scan};
use crate::ordinal::Ordinal;
use crate::real::{Check, Real, RealCtx};
use crate::scalar::Scalar;
use crate::schreier::{is_member, m_star, member_by_definition, s_index, t_alpha};
use crate::sets::FiniteSet;
use crate::spaces::{Space, Witness};
use crate::vector::BlockVector;

#[derive(Debug, Clone, Serialize)]
pub struct FailureRecord {
    pub instance: String,
    /// Inputs sufficient to replay the instance.
    pub replay: String,
    pub observed: String,
    pub required: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkipRecord {
    pub instance: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub id: String,
    pub instances: u64,
    pub failures: Vec<FailureRecord>,
    pub skipped: Vec<SkipRecord>,
    pub notes: Vec<String>,
    #[serde(skip_serializing)]
    pub wall_ms: u64,
}

impl SuiteResult {
    fn new(id: &str) -> Self {
        SuiteResult {
            id: id.to_string(),
            instances: 0,
            failures: Vec::new(),
            skipped: Vec::new(),
            notes: Vec::new(),
            wall_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(
        &mut self,
        instance: impl Into<String>,
        replay: impl Into<String>,
        ok: bool,
        observed: impl Into<String>,
        required: impl Into<String>,
    ) {
        self.instances += 1;
        if !ok {
            self.failures.push(FailureRecord {
                instance: instance.into(),
                replay: replay.into(),
                observed: observed.into(),
                required: required.into(),
            });
        }
    }

    fn check_cmp(
        &mut self,
        instance: impl Into<String>,
        replay: impl Into<String>,
        check: Check,
        observed: impl Into<String>,
        required: impl Into<String>,
        allow_envelope: bool,
    ) {
        let ok = if allow_envelope {
            check.verified_within_envelope()
        } else {
            check.verified()
        };
        self.check(instance, replay, ok, observed, required);
    }

    fn skip(&mut self, instance: impl Into<String>, reason: impl Into<String>) {
        self.instances += 1;
        self.skipped.push(SkipRecord {
            instance: instance.into(),
            reason: reason.into(),
        });
    }
}

/// The suite registry: id, what it verifies, and the result roles covered.
pub const SUITES: &[(&str, &str, &[&str])] = &[
    (
        "schreier-oracle",
        "membership agrees with the definition-literal enumerator",
        &["family-membership"],
    ),
    (
        "approx-family-containment",
        "the approximating-sequence rule yields nested families",
        &["approx-containment"],
    ),
    (
        "block-sum-bound",
        "block averages over a member set sum to at most 6",
        &["block-sum-bound"],
    ),
    (
        "average-properties",
        "convexity, monotonicity, support and partition consistency of averages",
        &[
            "average-convexity",
            "average-monotone",
            "average-support",
            "average-partition",
        ],
    ),
    (
        "packing-vs-shift",
        "the packing number is at most the smallest shift index",
        &["packing-vs-shift"],
    ),
    (
        "shift-halving",
        "halving the interval size at most halves the shift index",
        &["shift-halving"],
    ),
    (
        "gauge-properties",
        "the realized gauge properties at every breakpoint",
        &[
            "gauge-endpoints",
            "gauge-monotone",
            "gauge-ratio-monotone",
            "gauge-concave",
            "gauge-sqrt-segment",
            "gauge-theta-sandwich",
            "gauge-quartic-segment",
            "gauge-theta-phi-sandwich",
            "gauge-envelope",
        ],
    ),
    (
        "theta-quartic-bound",
        "the growth function stays below the fourth root at full-scale anchors",
        &["theta-quartic"],
    ),
    (
        "theta-ratio-monotone",
        "squared growth over position strictly decreases",
        &["theta-ratio"],
    ),
    (
        "indicator-sandwich",
        "indicator seminorms against the shift-index gauge bounds",
        &[
            "indicator-norm1-upper",
            "indicator-norm1-lower",
            "indicator-norm2-upper",
            "indicator-norm3-upper",
            "indicator-norm4-upper",
        ],
    ),
    (
        "democracy-constant",
        "member indicators are dominated by arbitrary same-size indicators",
        &["democracy-constant"],
    ),
    (
        "democracy-divergence",
        "the long-block indicator dwarfs same-cardinality placed indicators",
        &["democracy-divergence-lower", "democracy-divergence-ratio"],
    ),
    (
        "gauge-harmonic-bound",
        "inverse-gauge partial sums stay below the quartic-log bound",
        &["gauge-harmonic"],
    ),
    (
        "projection-bound",
        "member projections never sextuple the norm",
        &["projection-bound"],
    ),
    (
        "uncond-witness",
        "the inverse-gauge witness pair separates projection norms",
        &["uncond-witness-lower", "uncond-witness-upper"],
    ),
    (
        "window-block-growth",
        "block-window indicators grow like the root of the window",
        &["window-democracy-growth", "window-democracy-bounded"],
    ),
    (
        "window-ladder",
        "the alternating/positive block-witness ratio climbs",
        &["window-uncond-ladder", "window-alternating-bound"],
    ),
    (
        "thresholded-partial-sums",
        "thresholded gauge partial sums stay below 3",
        &["threshold-partial-sums"],
    ),
    (
        "thresholded-window-sums",
        "thresholded window sums stay below 3 + sqrt 2",
        &["threshold-window-sums", "greedy-ratio-ceiling"],
    ),
    (
        "lower-block-democracy",
        "lower-order block indicators take their minimum as value",
        &[
            "lower-block-value",
            "lower-member-bounded",
            "lower-uncond-witness",
        ],
    ),
];

pub fn suite_ids() -> Vec<&'static str> {
    SUITES.iter().map(|(id, _, _)| *id).collect()
}

pub fn run_suite(id: &str, cfg: &RunConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let mut res = match id {
        "schreier-oracle" => suite_schreier_oracle(cfg),
        "approx-family-containment" => suite_approx_containment(cfg),
        "block-sum-bound" => suite_block_sum(cfg),
        "average-properties" => suite_average_properties(cfg),
        "packing-vs-shift" => suite_packing_vs_shift(cfg),
        "shift-halving" => suite_shift_halving(cfg),
        "gauge-properties" => suite_gauge_properties(cfg),
        "theta-quartic-bound" => suite_theta_quartic(cfg),
        "theta-ratio-monotone" => suite_theta_ratio(cfg),
        "indicator-sandwich" => suite_indicator_sandwich(cfg),
        "democracy-constant" => suite_democracy_constant(cfg),
        "democracy-divergence" => suite_democracy_divergence(cfg),
        "gauge-harmonic-bound" => suite_gauge_harmonic(cfg),
        "projection-bound" => suite_projection_bound(cfg),
        "uncond-witness" => suite_uncond_witness(cfg),
        "window-block-growth" => suite_window_block_growth(cfg),
        "window-ladder" => suite_window_ladder(cfg),
        "thresholded-partial-sums" => suite_thresholded_partial_sums(cfg),
        "thresholded-window-sums" => suite_thresholded_window_sums(cfg),
        "lower-block-democracy" => suite_lower_block_democracy(cfg),
        other => return Err(Error::UnknownSuite(other.to_string())),
    }?;
    res.wall_ms = start.elapsed().as_millis() as u64;
    Ok(res)
}

pub fn run_all(cfg: &RunConfig) -> Result<Vec<SuiteResult>> {
    suite_ids()
        .into_iter()
        .map(|id| run_suite(id, cfg))
        .collect()
}

/// Deterministic JSON: excludes wall-clock timing.
pub fn canonical_json(results: &[SuiteResult]) -> String {
    serde_json::to_string_pretty(results).expect("serializable") + "\n"
}

fn desk_space(cfg: &RunConfig) -> Result<Space> {
    Ok(Space::section_three(
        desk_profile(&cfg.budget())?,
        cfg.caps(),
    ))
}

fn aa_space(cfg: &RunConfig, order: u64) -> Result<Space> {
    Space::section_four_aa(Ordinal::nat(order), cfg.precision_bits, cfg.caps())
}

fn ab_space(cfg: &RunConfig) -> Result<Space> {
    Space::section_four_ab(
        Ordinal::nat(2),
        Ordinal::zero(),
        vec![2, 3, 4],
        vec![3, 4, 5],
        true,
        cfg.precision_bits,
        cfg.caps(),
    )
}

// ----- combinatorial suites -----

fn suite_schreier_oracle(_cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("schreier-oracle");
    for order in [Ordinal::nat(1), Ordinal::nat(2)] {
        for mask in 0u32..(1 << 12) {
            let elems: Vec<u64> = (0..12)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| j as u64 + 1)
                .collect();
            let e = FiniteSet::from_u64s(&elems).expect("increasing");
            let fast = is_member(&e, &order);
            let slow = member_by_definition(&e, &order);
            res.check(
                format!("order {order}, mask {mask:#06x}"),
                format!("set {{{e}}}"),
                fast == slow,
                format!("greedy {fast}"),
                format!("literal {slow}"),
            );
        }
    }
    Ok(res)
}

fn suite_approx_containment(_cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("approx-family-containment");
    // For limit orders, members at one approximating index stay members at
    // the next, exhaustively over a small universe.
    let limits = [
        Ordinal::omega(),
        "w*2".parse().unwrap(),
        "w^2".parse::<Ordinal>().unwrap(),
    ];
    for a in &limits {
        for i in 1..=4u64 {
            let lvl_i = a.lambda_approx(i)?;
            let lvl_j = a.lambda_approx(i + 1)?;
            for mask in 0u32..(1 << 10) {
                let elems: Vec<u64> = (0..10)
                    .filter(|j| mask >> j & 1 == 1)
                    .map(|j| j as u64 + 1)
                    .collect();
                let e = FiniteSet::from_u64s(&elems).expect("increasing");
                if is_member(&e, &lvl_i) {
                    res.check(
                        format!("limit {a}, index {i}"),
                        format!("set {{{e}}}"),
                        is_member(&e, &lvl_j),
                        "member at next index".to_string(),
                        "containment".to_string(),
                    );
                }
            }
        }
    }
    Ok(res)
}

fn suite_block_sum(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("block-sum-bound");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb10c);
    let budget = cfg.budget();
    let six = BigRational::from_integer(BigInt::from(6));
    for order in [Ordinal::nat(1), Ordinal::nat(2)] {
        for t in 0..cfg.block_sum_trials {
            let want_blocks = rng.random_range(1..=5u64);
            let anchor = BigUint::from(rng.random_range(1..=40u64));
            // Later blocks of fast-growing orders can exceed the magnitude
            // budget; truncate there (fewer blocks is still an instance).
            let mut blocks = Vec::new();
            let mut lo = anchor.clone();
            for _ in 0..want_blocks {
                match crate::averages::interval_average(&order, &lo, &budget) {
                    Ok(avg) => {
                        lo = avg.support_max().clone() + 1u32;
                        blocks.push(avg);
                    }
                    Err(Error::BudgetExceeded(_)) => break,
                    Err(e) => return Err(e),
                }
            }
            if blocks.is_empty() {
                res.skip(
                    format!("order {order}, trial {t}"),
                    "first block beyond magnitude budget".to_string(),
                );
                continue;
            }
            // Random member set intersecting the covered range.
            let hi_cap = blocks.last().unwrap().support_max().clone();
            let f = random_member_set_big(&mut rng, &order, &anchor, &hi_cap);
            let sum = block_sum(&order, &blocks, &f)?;
            res.check(
                format!("order {order}, trial {t}"),
                format!("anchor {anchor}, blocks {}, F {{{f}}}", blocks.len()),
                sum <= six,
                sum.to_string(),
                "<= 6".to_string(),
            );
        }
    }
    Ok(res)
}

/// Random member set with big-integer elements in `[lo, hi]`, by rejection
/// over structured candidates.
fn random_member_set_big(
    rng: &mut ChaCha8Rng,
    order: &Ordinal,
    lo: &BigUint,
    hi: &BigUint,
) -> FiniteSet {
    loop {
        let len = rng.random_range(1..=8usize);
        let span = hi - lo;
        let mut elems: Vec<BigUint> = Vec::new();
        let mut cur = lo.clone();
        for _ in 0..len {
            // Jump by a random fraction of the remaining span.
            let denom = rng.random_range(2..=64u64) * len as u64;
            let jump = (&span / denom).max(BigUint::one());
            let step = rng.random_range(1..=3u64);
            cur = &cur + jump * step;
            if cur > *hi {
                break;
            }
            elems.push(cur.clone());
        }
        if elems.is_empty() {
            elems.push(lo.clone().max(BigUint::one()));
        }
        let set = FiniteSet::new(elems).expect("increasing");
        if is_member(&set, order) {
            return set;
        }
    }
}

fn suite_average_properties(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("average-properties");
    let budget = cfg.budget();
    // Explicit constructions re-verified (constructors verify on the spot;
    // failures would have surfaced as errors).
    let cases: Vec<(Ordinal, FiniteSet)> = vec![
        (Ordinal::zero(), FiniteSet::from_u64s(&[7]).unwrap()),
        (Ordinal::nat(1), FiniteSet::from_u64s(&[2, 3]).unwrap()),
        (Ordinal::nat(1), FiniteSet::from_u64s(&[3, 5, 9]).unwrap()),
        (Ordinal::nat(2), FiniteSet::interval(2, 7)),
        (
            Ordinal::nat(2),
            FiniteSet::from_u64s(&[2, 4, 5, 6, 7, 8, 9]).unwrap(),
        ),
        (Ordinal::omega(), FiniteSet::interval(2, 2047)),
    ];
    for (order, set) in &cases {
        let avg = repeated_average(order, set)?;
        res.check(
            format!("order {order}, explicit"),
            format!("set {{{set}}}"),
            avg.verify_properties().is_ok() && avg.support_equals_set(set),
            "convex, monotone, support matches".to_string(),
            "all three".to_string(),
        );
    }
    // Partition consistency: the along-the-tail averages coincide with the
    // per-block constructions.
    for (order, anchor, count) in [
        (Ordinal::nat(1), 2u64, 4u64),
        (Ordinal::nat(1), 5, 3),
        (Ordinal::nat(2), 2, 2),
    ] {
        let along = averages_along(&order, &BigUint::from(anchor), count, &budget)?;
        let mut ok = true;
        for avg in &along {
            let explicit_set = FiniteSet::new(num_iter_range(avg.support_min(), avg.support_max()))
                .expect("increasing");
            if explicit_set.len() < 1 << 16 {
                let direct = repeated_average(&order, &explicit_set)?;
                ok &= &direct == avg;
            }
        }
        res.check(
            format!("order {order}, anchor {anchor}"),
            format!("{count} consecutive blocks"),
            ok,
            "blockwise equal".to_string(),
            "partition consistency".to_string(),
        );
    }
    // Process-wide counter: stable across reruns only in its rejection
    // component, so the verified count stays out of the canonical output.
    let (_, rejected) = construction_stats();
    res.check(
        "construction counters",
        "process-wide",
        rejected == 0,
        format!("{rejected} rejected"),
        "no construction ever violated the weight properties".to_string(),
    );
    Ok(res)
}

fn num_iter_range(lo: &BigUint, hi: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    let mut cur = lo.clone();
    while cur <= *hi {
        out.push(cur.clone());
        cur += 1u32;
    }
    out
}

fn suite_packing_vs_shift(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("packing-vs-shift");
    let budget = cfg.budget();
    for order in [Ordinal::nat(1), Ordinal::nat(2)] {
        let next = order.succ();
        for mask in 1u32..(1 << 12) {
            let elems: Vec<u64> = (0..12)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| j as u64 + 1)
                .collect();
            let e = FiniteSet::from_u64s(&elems).expect("increasing");
            if !is_member(&e, &next) {
                continue;
            }
            let t = t_alpha(&e, &order, 14)?;
            let m = m_star(&BigUint::from(e.len()), &next, &budget)?;
            res.check(
                format!("order {order}"),
                format!("E {{{e}}}"),
                BigUint::from(t) <= m,
                format!("packing {t}"),
                format!("<= shift index {m}"),
            );
        }
    }
    Ok(res)
}

fn suite_shift_halving(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("shift-halving");
    let budget = cfg.budget();
    for order in [Ordinal::nat(1), Ordinal::nat(2)] {
        for m in 1..=64u64 {
            let p1 = m_star(&BigUint::from(m), &order, &budget)?;
            let p2 = m_star(&BigUint::from(m.div_ceil(2)), &order, &budget)?;
            res.check(
                format!("order {order}, m={m}"),
                format!("sizes {m} and {}", m.div_ceil(2)),
                &p2 + &p2 >= p1,
                format!("p1={p1}, p2={p2}"),
                "2 p2 >= p1".to_string(),
            );
        }
    }
    Ok(res)
}

// ----- gauge suites -----

fn suite_gauge_properties(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("gauge-properties");
    let p = desk_profile(&cfg.budget())?;
    for (id, n, worst) in p.check_properties() {
        res.check(
            id.clone(),
            format!("desk profile, {n} breakpoints"),
            worst.verified(),
            format!("{worst}"),
            "proved or touching at every breakpoint".to_string(),
        );
    }
    for (id, n, worst) in p.full_scale_checks() {
        res.skip(
            id.clone(),
            format!(
                "full-scale-only bound (needs theta anchors >= 1e5); desk outcome {worst} over {n} breakpoints"
            ),
        );
    }
    for (desc, status) in &p.constraints {
        match status {
            ConstraintStatus::Verified => res.check(
                format!("constraint {desc}"),
                "desk profile".to_string(),
                true,
                "verified".to_string(),
                "verified or waived".to_string(),
            ),
            ConstraintStatus::Waived(reason) => {
                res.skip(format!("constraint {desc}"), reason.clone())
            }
        }
    }
    // Sampled interior checks of the theta-phi sandwich between breakpoints.
    let ctx = *p.ctx();
    let budget = cfg.budget();
    let n1 = p.n_seq()[0];
    let sqrt2 = Real::from_u64(2, &ctx).sqrt()?;
    for k in (0..20u64).map(|t| t * 25) {
        let x0 = s_index(&p.alpha.succ(), &BigUint::from(n1), k, &budget)?;
        let x1 = s_index(&p.alpha.succ(), &BigUint::from(n1), k + 1, &budget)?;
        let mid = (&x0 + &x1) >> 1;
        if mid > p.window {
            break;
        }
        let theta = theta_eval(&p.alpha.succ(), &BigUint::from(n1), &mid, &budget, &ctx)?;
        let phi = p.phi_int(&mid)?;
        let lo_ok = theta.check_le(&phi);
        let hi_ok = phi.check_le(&theta.mul(&sqrt2));
        res.check_cmp(
            format!("interior sandwich at segment {k}"),
            format!("x = midpoint of [s({k}), s({})]", k + 1),
            worst_check(lo_ok, hi_ok),
            format!("lower {lo_ok}, upper {hi_ok}"),
            "theta <= phi <= sqrt(2) theta".to_string(),
            false,
        );
    }
    Ok(res)
}

fn worst_check(a: Check, b: Check) -> Check {
    let rank = |c: Check| match c {
        Check::Proved => 0,
        Check::Touching => 1,
        Check::WithinEnvelope => 2,
        Check::Refuted => 3,
    };
    if rank(a) >= rank(b) {
        a
    } else {
        b
    }
}

fn suite_theta_quartic(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("theta-quartic-bound");
    let ctx = RealCtx::new(cfg.precision_bits);
    let budget = cfg.budget();
    let m = BigUint::from(100_000u64);
    let one = Ordinal::nat(1);
    let ln_m = Real::from_biguint(&m, &ctx).ln()?;
    let mut s = m.clone();
    for i in 0..=60u64 {
        let theta = ln_m.add(&Real::from_u64(i, &ctx));
        let quartic = Real::from_biguint(&s, &ctx).fourth_root()?;
        res.check_cmp(
            format!("anchor 1e5, index {i}"),
            format!("s({i}) = {s}"),
            theta.check_le(&quartic),
            theta.to_decimal(10),
            format!("<= {}", quartic.to_decimal(10)),
            false,
        );
        s = crate::schreier::next_point(&one, &s, &budget)?;
    }
    res.notes.push(
        "checked at partition indices; linear interpolation plus concavity of the fourth root \
         extends the bound across segments"
            .to_string(),
    );
    Ok(res)
}

fn suite_theta_ratio(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("theta-ratio-monotone");
    let ctx = RealCtx::new(cfg.precision_bits);
    let budget = cfg.budget();
    let m = BigUint::from(100_000u64);
    let one = Ordinal::nat(1);
    // Sample points: each partition index and segment midpoint.
    let mut xs: Vec<BigUint> = Vec::new();
    let mut s = m.clone();
    for _ in 0..=60u64 {
        let nxt = crate::schreier::next_point(&one, &s, &budget)?;
        xs.push(s.clone());
        xs.push((&s + &nxt) >> 1);
        s = nxt;
    }
    xs.push(s);
    let mut prev: Option<(BigUint, Real)> = None;
    for x in xs {
        let theta = theta_eval(&one, &m, &x, &budget, &ctx)?;
        let sq = theta.square();
        if let Some((px, pv)) = prev {
            // Strict decrease of theta^2 / x, cross-multiplied.
            let lhs = sq.mul(&Real::from_biguint(&px, &ctx));
            let rhs = pv.mul(&Real::from_biguint(&x, &ctx));
            res.check_cmp(
                format!("ratio at {px} vs {x}"),
                "anchor 1e5".to_string(),
                lhs.check_lt(&rhs),
                lhs.to_decimal(10),
                format!("< {}", rhs.to_decimal(10)),
                false,
            );
        }
        prev = Some((x, sq));
    }
    Ok(res)
}

fn suite_gauge_harmonic(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("gauge-harmonic-bound");
    let p = desk_profile(&cfg.budget())?;
    let ctx = *p.ctx();
    for &m in p.m_seq() {
        let ln_m = Real::from_u64(m, &ctx).ln()?;
        let bound = ln_m.fourth_root()?.add(&Real::from_u64(3, &ctx));
        let mut inv_sum = Real::zero(&ctx);
        for q in 1..=m {
            let phi_q = p.phi_int(&BigUint::from(q))?;
            inv_sum = inv_sum.add(&Real::from_u64(1, &ctx).div(&phi_q)?);
            let value = p
                .phi_int(&BigUint::from(q))?
                .mul(&inv_sum)
                .div(&Real::from_u64(q, &ctx))?;
            res.check_cmp(
                format!("m={m}, q={q}"),
                "desk profile".to_string(),
                value.check_le(&bound),
                value.to_decimal(10),
                format!("<= ln^(1/4) m + 3 = {}", bound.to_decimal(10)),
                false,
            );
        }
    }
    Ok(res)
}

// ----- indicator and democracy suites -----

fn suite_indicator_sandwich(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("indicator-sandwich");
    let sp = desk_space(cfg)?;
    let p = sp.profile().expect("gauge space");
    let ctx = *sp.ctx();
    let budget = cfg.budget();
    let a1 = p.alpha.succ();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5a4d);
    let six = Real::from_u64(6, &ctx);
    let sqrt6 = six.sqrt()?;
    let sixth = Real::from_u64(1, &ctx).div(&six)?;
    for t in 0..cfg.sandwich_trials {
        let size = rng.random_range(1..=cfg.support_cap.min(12));
        let mut elems = Vec::new();
        let mut cur = 0u64;
        for _ in 0..size {
            cur += rng.random_range(1..=12u64);
            elems.push(cur);
        }
        let e = FiniteSet::from_u64s(&elems).expect("increasing");
        let x = BlockVector::indicator_set(&e);
        let mstar = m_star(&BigUint::from(e.len()), &a1, &budget)?;
        let phi = p.phi_int(&(&mstar + 1u32))?;
        let comps = sp.components(&x)?;
        let up = six.mul(&phi);
        let lo = sixth.mul(&phi);
        res.check_cmp(
            format!("trial {t}: reindexed seminorm upper"),
            format!("E {{{e}}}, shift {mstar}"),
            comps[0].value.check_le(&up),
            comps[0].value.to_decimal(10),
            format!("<= 6 phi = {}", up.to_decimal(10)),
            true,
        );
        res.check_cmp(
            format!("trial {t}: reindexed seminorm lower"),
            format!("E {{{e}}}, shift {mstar}"),
            lo.check_le(&comps[0].value),
            comps[0].value.to_decimal(10),
            format!(">= phi/6 = {}", lo.to_decimal(10)),
            true,
        );
        res.check_cmp(
            format!("trial {t}: theta-anchored seminorm upper"),
            format!("E {{{e}}}"),
            comps[1].value.check_le(&up),
            comps[1].value.to_decimal(10),
            format!("<= 6 phi = {}", up.to_decimal(10)),
            true,
        );
        res.check_cmp(
            format!("trial {t}: quadratic seminorm upper"),
            format!("E {{{e}}}"),
            comps[2].value.check_le(&sqrt6.mul(&phi)),
            comps[2].value.to_decimal(10),
            format!("<= sqrt(6) phi = {}", sqrt6.mul(&phi).to_decimal(10)),
            true,
        );
        res.check_cmp(
            format!("trial {t}: partial-sum seminorm upper"),
            format!("E {{{e}}}"),
            comps[3].value.check_le(&up),
            comps[3].value.to_decimal(10),
            format!("<= 6 phi = {}", up.to_decimal(10)),
            true,
        );
    }
    Ok(res)
}

fn suite_democracy_constant(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("democracy-constant");
    let sp = desk_space(cfg)?;
    let ctx = *sp.ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xde40);
    let c36 = Real::from_u64(36, &ctx);
    let one = Ordinal::nat(1);
    for t in 0..cfg.sandwich_trials.min(40) {
        let a = crate::greedy::random_member_set(&mut rng, &one, 40, 8);
        let extra = rng.random_range(0..4usize);
        let mut elems = Vec::new();
        let mut cur = 0u64;
        for _ in 0..a.len() + extra {
            cur += rng.random_range(1..=30u64);
            elems.push(cur);
        }
        let b = FiniteSet::from_u64s(&elems).expect("increasing");
        let na = sp.norm(&BlockVector::indicator_set(&a))?;
        let nb = sp.norm(&BlockVector::indicator_set(&b))?;
        res.check_cmp(
            format!("trial {t}"),
            format!("A {{{a}}}, B {{{b}}}"),
            na.value.check_le(&c36.mul(&nb.value)),
            na.value.to_decimal(10),
            format!("<= 36 ||1_B|| = {}", c36.mul(&nb.value).to_decimal(10)),
            true,
        );
    }
    Ok(res)
}

fn suite_democracy_divergence(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("democracy-divergence");
    let sp = desk_space(cfg)?;
    let p = sp.profile().expect("gauge space");
    let ctx = *sp.ctx();
    let budget = cfg.budget();
    let n1 = p.n_seq()[0];
    let a = sp.make_witness(&Witness::DemocracyS3 { n: n1 })?;
    let comps = sp.components(&a)?;
    let v2 = comps[1].value.clone();
    // Lower bound n ln n + n(n-1)/2.
    let n_r = Real::from_u64(n1, &ctx);
    let lower = n_r
        .mul(&n_r.ln()?)
        .add(&Real::from_u64(n1 * (n1 - 1) / 2, &ctx));
    res.check_cmp(
        "long-block lower bound",
        format!("A = [{n1}, {}]", p.window),
        lower.check_le(&v2),
        v2.to_decimal(14),
        format!(">= n ln n + n(n-1)/2 = {}", lower.to_decimal(14)),
        true,
    );
    // Computed norm of the same-cardinality order-1 placed indicator.
    let size = a.support_size();
    let b = BlockVector::indicator_span(size.clone(), &size + &size - 1u32)?;
    let nb = sp.norm(&b)?;
    let ratio = v2.div(&nb.value)?;
    let fifty = Real::from_u64(50, &ctx);
    res.check_cmp(
        "divergence ratio vs computed placed indicator",
        format!("|A| = |B|, B placed at {size}"),
        fifty.check_le(&ratio),
        ratio.to_decimal(10),
        "> 50".to_string(),
        false,
    );
    // The packing-bound comparison is looser; report it as a note.
    let mstar = m_star(&size, &p.alpha.succ(), &budget)?;
    let lemma_bound = Real::from_u64(6, &ctx).mul(&p.phi_int(&(&mstar + 1u32))?);
    let lemma_ratio = v2.div(&lemma_bound)?;
    res.notes.push(format!(
        "ratio against the shift-index bound 6 phi(m*+1): {} (the placed-indicator norm is the \
         sharper comparison)",
        lemma_ratio.to_decimal(8)
    ));
    res.notes
        .push(format!("placed-indicator norm {}", nb.value.to_decimal(10)));
    Ok(res)
}

fn suite_projection_bound(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("projection-bound");
    let sp = desk_space(cfg)?;
    let rep = uncond_scan(&sp, &Ordinal::zero(), cfg.scan_trials, cfg.seed ^ 0x9d)?;
    fold_scan(&mut res, &rep, &["projection-ratio"]);
    let aa = aa_space(cfg, 1)?;
    let rep = uncond_scan(&aa, &Ordinal::nat(1), cfg.scan_trials, cfg.seed ^ 0x9e)?;
    fold_scan(&mut res, &rep, &["projection-ratio"]);
    Ok(res)
}

fn suite_uncond_witness(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("uncond-witness");
    let sp = desk_space(cfg)?;
    let rep = uncond_scan(&sp, &Ordinal::zero(), 0, cfg.seed)?;
    fold_scan(
        &mut res,
        &rep,
        &["positive-witness-lower", "alternating-witness-upper"],
    );
    res.notes.push(
        "the lower bound ln(m)/5 only binds asymptotically; at the desk anchor the computed \
         value is reported and happens to clear it"
            .to_string(),
    );
    Ok(res)
}

fn fold_scan(res: &mut SuiteResult, rep: &crate::greedy::ScanReport, ids: &[&str]) {
    for inst in &rep.instances {
        if !ids.contains(&inst.id.as_str()) {
            continue;
        }
        match inst.verdict {
            crate::greedy::Verdict::Pass => res.check(
                inst.id.clone(),
                inst.params.clone(),
                true,
                inst.value.clone(),
                inst.bound.clone(),
            ),
            crate::greedy::Verdict::Fail | crate::greedy::Verdict::Indeterminate => res.check(
                inst.id.clone(),
                inst.params.clone(),
                false,
                inst.value.clone(),
                inst.bound.clone(),
            ),
            crate::greedy::Verdict::Skipped => res.skip(inst.id.clone(), inst.params.clone()),
        }
    }
}

// ----- anchored-partition suites -----

fn suite_window_block_growth(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("window-block-growth");
    let sp = aa_space(cfg, 1)?;
    let ctx = *sp.ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xe4);
    let tol = BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64));
    for n in 1..=12u64 {
        let e = sp.make_witness(&Witness::EBlock { n })?;
        let ne = sp.norm(&e)?;
        // Closed form: sum_{j=1..n} j^(-1/2).
        let mut target = Real::zero(&ctx);
        for j in 1..=n {
            target = target.add(&Real::from_u64(1, &ctx).div(&Real::from_u64(j, &ctx).sqrt()?)?);
        }
        let err = ne.value.sub(&target).abs();
        let tol_r = target.scale_rat(&tol, &ctx);
        res.check_cmp(
            format!("window indicator value, N={n}"),
            format!("blocks {n}..{}", 2 * n - 1),
            err.check_le(&tol_r),
            ne.value.to_decimal(14),
            format!("= {} within 1e-9 relative", target.to_decimal(14)),
            true,
        );
        let sqrt_n = Real::from_u64(n, &ctx).sqrt()?;
        res.check_cmp(
            format!("window indicator growth, N={n}"),
            "root lower bound".to_string(),
            sqrt_n.check_le(&ne.value),
            ne.value.to_decimal(10),
            format!(">= sqrt(N) = {}", sqrt_n.to_decimal(10)),
            true,
        );
        // Random same-cardinality order-1 member: exact rational bounds.
        let size = e.support_size();
        let a = random_flat_member_indicator(&mut rng, &size);
        let n1sq = sp.aa_norm1_square_exact(&a)?.expect("indicator");
        let maj = sp.aa_norm2_majorant_exact(&a)?.expect("indicator");
        let six = BigRational::from_integer(BigInt::from(6));
        res.check(
            format!("same-size member indicator, N={n}"),
            format!("|A| = {size}, {} runs", a.segs().len()),
            n1sq <= six && maj <= six,
            format!("quadratic^2 = {n1sq}, window majorant = {maj}"),
            "both <= 6 exactly".to_string(),
        );
    }
    Ok(res)
}

/// Random order-1 member indicator of exactly `size` elements: a few runs
/// starting at `size`, totalling `size` positions.
fn random_flat_member_indicator(rng: &mut ChaCha8Rng, size: &BigUint) -> BlockVector {
    use crate::sets::IntSpan;
    use crate::vector::{Seg, SegKind};
    let runs = rng.random_range(1..=6u32);
    let mut segs = Vec::new();
    let mut remaining = size.clone();
    let mut lo = size.clone();
    for r in 0..runs {
        if remaining.is_zero() {
            break;
        }
        let len = if r == runs - 1 {
            remaining.clone()
        } else {
            (&remaining / (runs - r)).max(BigUint::one())
        };
        let hi = &lo + &len - 1u32;
        segs.push(Seg {
            span: IntSpan::new(lo.clone(), hi.clone()).expect("ordered"),
            kind: SegKind::Const(Scalar::one()),
        });
        remaining -= &len;
        lo = hi + 1u32 + BigUint::from(rng.random_range(1..=64u64));
    }
    BlockVector::new(segs).expect("disjoint")
}

fn suite_window_ladder(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("window-ladder");
    let sp = aa_space(cfg, 1)?;
    let ctx = *sp.ctx();
    let tol = BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64));
    let three = Real::from_u64(3, &ctx);
    let mut prev_ratio: Option<Real> = None;
    let mut last_ratio = Real::zero(&ctx);
    for n in 4..=16u64 {
        let x = sp.make_witness(&Witness::XYBlock {
            n,
            alternating: true,
        })?;
        let y = sp.make_witness(&Witness::XYBlock {
            n,
            alternating: false,
        })?;
        let nx = sp.norm(&x)?;
        let ny = sp.norm(&y)?;
        // Closed forms: harmonic number H_n and its square root.
        let mut h = BigRational::zero();
        for j in 1..=n {
            h += BigRational::new(BigInt::one(), BigInt::from(j));
        }
        let h_real = Real::from_ratio(&h, &ctx);
        let sqrt_h = h_real.sqrt()?;
        let err_y = ny.value.sub(&h_real).abs();
        res.check_cmp(
            format!("positive witness value, N={n}"),
            "harmonic closed form".to_string(),
            err_y.check_le(&h_real.scale_rat(&tol, &ctx)),
            ny.value.to_decimal(14),
            format!("= H_N = {} within 1e-9 relative", h_real.to_decimal(14)),
            true,
        );
        let err_x = nx.value.sub(&sqrt_h).abs();
        res.check_cmp(
            format!("alternating witness value, N={n}"),
            "root-harmonic closed form".to_string(),
            err_x.check_le(&sqrt_h.scale_rat(&tol, &ctx)),
            nx.value.to_decimal(14),
            format!(
                "= sqrt(H_N) = {} within 1e-9 relative",
                sqrt_h.to_decimal(14)
            ),
            true,
        );
        // Alternating window sum stays below 3.
        let comps = sp.components(&x)?;
        res.check_cmp(
            format!("alternating window sum, N={n}"),
            "per-term exact inner sums".to_string(),
            comps[2].value.check_lt(&three),
            comps[2].value.to_decimal(12),
            "< 3".to_string(),
            false,
        );
        let ratio = ny.value.div(&nx.value)?;
        if let Some(prev) = &prev_ratio {
            res.check_cmp(
                format!("ladder ratio increases, N={n}"),
                format!("previous {}", prev.to_decimal(10)),
                prev.check_lt(&ratio),
                ratio.to_decimal(10),
                "strictly increasing".to_string(),
                false,
            );
        }
        prev_ratio = Some(ratio.clone());
        last_ratio = ratio;
    }
    let threshold = Real::from_ratio(&BigRational::new(9.into(), 5.into()), &ctx);
    res.check_cmp(
        "ladder ratio exceeds 1.8 at N=16",
        "final rung".to_string(),
        threshold.check_lt(&last_ratio),
        last_ratio.to_decimal(10),
        "> 1.8".to_string(),
        false,
    );
    Ok(res)
}

fn suite_thresholded_partial_sums(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("thresholded-partial-sums");
    let sp = desk_space(cfg)?;
    let rep = qg_scan(&sp, cfg.qg_trials, cfg.seed ^ 0x4951)?;
    fold_scan(
        &mut res,
        &rep,
        &[
            "thresholded-partial-sum",
            "greedy-ratio",
            "greedy-reconstruction",
            "monotone-seminorm-projection",
        ],
    );
    if let Some(r) = rep.max_ratio {
        res.notes.push(format!("max greedy ratio {r:.6}"));
    }
    Ok(res)
}

fn suite_thresholded_window_sums(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("thresholded-window-sums");
    let sp = aa_space(cfg, 1)?;
    let rep = qg_scan(&sp, cfg.qg_trials, cfg.seed ^ 0x4952)?;
    fold_scan(
        &mut res,
        &rep,
        &[
            "thresholded-window-sum",
            "greedy-ratio",
            "greedy-reconstruction",
            "monotone-seminorm-projection",
        ],
    );
    if let Some(r) = rep.max_ratio {
        res.notes.push(format!("max greedy ratio {r:.6}"));
    }
    Ok(res)
}

fn suite_lower_block_democracy(cfg: &RunConfig) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("lower-block-democracy");
    let sp = ab_space(cfg)?;
    let rep = democracy_scan(&sp, &Ordinal::zero(), 0, cfg.seed ^ 0xab)?;
    fold_scan(
        &mut res,
        &rep,
        &["lower-block-value", "member-indicator-bounded"],
    );
    // The witness-pair non-unconditionality transfer needs witness blocks
    // clear of the lower-order blocks; under the desk anchors every
    // admissible window intersects them, and the first clear block already
    // has an average beyond the magnitude budget.
    res.skip(
        "lower-space witness ladder",
        "witness blocks clear of the lower-order blocks start beyond the magnitude budget at \
         the desk anchors"
            .to_string(),
    );
    Ok(res)
}

/// Registry completeness: every covered-result role is claimed by exactly
/// the suites that implement it, and ids are unique.
pub fn registry_roles() -> Vec<&'static str> {
    let mut roles: Vec<&'static str> = SUITES
        .iter()
        .flat_map(|(_, _, r)| r.iter().copied())
        .collect();
    roles.sort_unstable();
    roles
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg() -> RunConfig {
        RunConfig {
            seed: 3,
            block_sum_trials: 20,
            qg_trials: 4,
            sandwich_trials: 6,
            scan_trials: 4,
            ..RunConfig::default()
        }
    }

    #[test]
    fn unknown_suite_rejected() {
        assert!(matches!(
            run_suite("no-such-suite", &quick_cfg()),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn registry_is_complete_and_unique() {
        let ids = suite_ids();
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len(), "duplicate suite ids");
        // Every expected result role is covered exactly once.
        let mut roles = registry_roles();
        let n = roles.len();
        roles.dedup();
        assert_eq!(roles.len(), n, "duplicate role coverage");
        for required in [
            "family-membership",
            "block-sum-bound",
            "average-convexity",
            "average-partition",
            "packing-vs-shift",
            "shift-halving",
            "gauge-concave",
            "gauge-theta-sandwich",
            "theta-quartic",
            "theta-ratio",
            "indicator-norm1-upper",
            "indicator-norm1-lower",
            "indicator-norm2-upper",
            "indicator-norm3-upper",
            "indicator-norm4-upper",
            "democracy-constant",
            "democracy-divergence-lower",
            "democracy-divergence-ratio",
            "gauge-harmonic",
            "projection-bound",
            "uncond-witness-lower",
            "uncond-witness-upper",
            "window-democracy-growth",
            "window-democracy-bounded",
            "window-uncond-ladder",
            "window-alternating-bound",
            "threshold-partial-sums",
            "threshold-window-sums",
            "greedy-ratio-ceiling",
            "lower-block-value",
            "lower-member-bounded",
            "lower-uncond-witness",
            "approx-containment",
        ] {
            assert!(roles.contains(&required), "role {required} not covered");
        }
    }

    #[test]
    fn small_suites_pass() {
        let cfg = quick_cfg();
        for id in [
            "shift-halving",
            "gauge-harmonic-bound",
            "average-properties",
        ] {
            let r = run_suite(id, &cfg).unwrap();
            assert!(r.passed(), "{id}: {:?}", r.failures);
            assert!(r.instances > 0);
        }
    }

    #[test]
    fn canonical_json_deterministic() {
        let cfg = quick_cfg();
        let r1 = run_suite("shift-halving", &cfg).unwrap();
        let r2 = run_suite("shift-halving", &cfg).unwrap();
        assert_eq!(canonical_json(&[r1]), canonical_json(&[r2]));
    }
}
