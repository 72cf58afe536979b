//! Exact-rational repeated averages and the block-sum bound.
//!
//! An average is stored in run-length form: the recursion yields piecewise
//! constant weights on interval blocks, so even averages supported on
//! astronomically long intervals have short descriptions. Every constructor
//! verifies the convexity, monotonicity and support properties on the spot
//! and reports a violation instead of accepting it; a process-wide counter
//! tracks how many averages were built and verified.

use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::schreier;
use crate::sets::{FiniteSet, IntSpan};

static VERIFIED: AtomicU64 = AtomicU64::new(0);
static REJECTED: AtomicU64 = AtomicU64::new(0);

/// (verified, rejected) construction counts since process start. Every
/// constructor verifies on the spot, so a nonzero rejection count means some
/// construction produced weights violating the convexity or monotonicity
/// properties (and the caller saw the error).
pub fn construction_stats() -> (u64, u64) {
    (
        VERIFIED.load(AtomicOrdering::Relaxed),
        REJECTED.load(AtomicOrdering::Relaxed),
    )
}

/// Convex weights on a maximal set, in run-length form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepeatedAverage {
    alpha: Ordinal,
    runs: Vec<(IntSpan, BigRational)>,
}

/// Cap on stored runs per average; beyond this the description is no longer
/// "short" and explicit storage is refused.
const RUN_CAP: usize = 1 << 16;

impl RepeatedAverage {
    pub fn alpha(&self) -> &Ordinal {
        &self.alpha
    }

    pub fn runs(&self) -> &[(IntSpan, BigRational)] {
        &self.runs
    }

    pub fn support_min(&self) -> &BigUint {
        &self.runs.first().expect("nonempty").0.lo
    }

    pub fn support_max(&self) -> &BigUint {
        &self.runs.last().expect("nonempty").0.hi
    }

    pub fn support_size(&self) -> BigUint {
        self.runs
            .iter()
            .fold(BigUint::zero(), |acc, (s, _)| acc + s.len())
    }

    pub fn weight_at(&self, i: &BigUint) -> BigRational {
        for (span, w) in &self.runs {
            if span.contains(i) {
                return w.clone();
            }
        }
        BigRational::zero()
    }

    /// First (largest) weight.
    pub fn first_weight(&self) -> &BigRational {
        &self.runs.first().expect("nonempty").1
    }

    /// Last (smallest) weight.
    pub fn last_weight(&self) -> &BigRational {
        &self.runs.last().expect("nonempty").1
    }

    /// Total weight mass intersecting a span, exactly.
    pub fn mass_on_span(&self, span: &IntSpan) -> BigRational {
        let mut acc = BigRational::zero();
        for (s, w) in &self.runs {
            if let Some(i) = s.intersect(span) {
                acc += w * BigRational::from_integer(BigInt::from(i.len()));
            }
        }
        acc
    }

    pub fn mass_on_set(&self, f: &FiniteSet) -> BigRational {
        let mut acc = BigRational::zero();
        for e in f.elems() {
            acc += self.weight_at(e);
        }
        acc
    }

    pub fn support_equals_set(&self, a: &FiniteSet) -> bool {
        let mut pos = a.elems().iter();
        for (span, _) in &self.runs {
            let mut i = span.lo.clone();
            while i <= span.hi {
                match pos.next() {
                    Some(p) if *p == i => {}
                    _ => return false,
                }
                i += 1u32;
            }
        }
        pos.next().is_none()
    }

    /// Convexity, positivity and monotonicity of the weights. Runs are kept
    /// sorted, so cross-run monotonicity covers the whole support.
    pub fn verify_properties(&self) -> Result<()> {
        if self.runs.is_empty() {
            return Err(Error::input("average with empty support"));
        }
        let mut total = BigRational::zero();
        for (span, w) in &self.runs {
            if !w.is_positive() {
                return Err(Error::input("average weight not positive"));
            }
            total += w * BigRational::from_integer(BigInt::from(span.len()));
        }
        if !total.is_one() {
            return Err(Error::input(format!("average mass {total} != 1")));
        }
        for w in self.runs.windows(2) {
            if w[0].0.hi >= w[1].0.lo {
                return Err(Error::input("average runs out of order"));
            }
            if w[0].1 < w[1].1 {
                return Err(Error::input("average weights increase along support"));
            }
        }
        Ok(())
    }

    fn finish(alpha: Ordinal, runs: Vec<(IntSpan, BigRational)>) -> Result<Self> {
        let avg = RepeatedAverage { alpha, runs };
        match avg.verify_properties() {
            Ok(()) => {
                VERIFIED.fetch_add(1, AtomicOrdering::Relaxed);
                Ok(avg)
            }
            Err(e) => {
                REJECTED.fetch_add(1, AtomicOrdering::Relaxed);
                Err(e)
            }
        }
    }

    /// JSON dump `{"alpha": ..., "support": ..., "rle": [[lo,hi,"p/q"],...]}`.
    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let rle: Vec<serde_json::Value> = self
            .runs
            .iter()
            .map(|(s, q)| serde_json::json!([s.lo.to_string(), s.hi.to_string(), q.to_string()]))
            .collect();
        let line = serde_json::json!({
            "alpha": self.alpha.to_string(),
            "support": format!("[{},{}]", self.support_min(), self.support_max()),
            "rle": rle,
        });
        writeln!(w, "{line}")
    }
}

/// The repeated average over an explicit maximal set.
pub fn repeated_average(a: &Ordinal, set: &FiniteSet) -> Result<RepeatedAverage> {
    if a.is_zero() {
        if set.len() != 1 {
            return Err(Error::NotMaximal);
        }
        let p = set.min().unwrap().clone();
        return RepeatedAverage::finish(a.clone(), vec![(IntSpan::point(p), BigRational::one())]);
    }
    let parts = schreier::decompose_max(set, a)?;
    let m = BigRational::from_integer(BigInt::from(parts.len()));
    let level = a
        .lambda_approx(parts.len() as u64)
        .expect("a >= 1 and min >= 1");
    let mut runs = Vec::new();
    for part in &parts {
        let sub = repeated_average(&level, part)?;
        for (span, w) in sub.runs {
            push_run(&mut runs, span, w / &m)?;
        }
    }
    RepeatedAverage::finish(a.clone(), runs)
}

/// The repeated average over the maximal interval block starting at `lo`.
pub fn interval_average(a: &Ordinal, lo: &BigUint, budget: &Budget) -> Result<RepeatedAverage> {
    budget.check_magnitude(lo, "average anchor")?;
    if lo.is_zero() {
        return Err(Error::input("anchors start at 1"));
    }
    let runs = interval_runs(a, lo, budget)?;
    RepeatedAverage::finish(a.clone(), runs)
}

fn interval_runs(
    a: &Ordinal,
    lo: &BigUint,
    budget: &Budget,
) -> Result<Vec<(IntSpan, BigRational)>> {
    if a.is_zero() {
        return Ok(vec![(IntSpan::point(lo.clone()), BigRational::one())]);
    }
    if a.as_nat() == Some(1) {
        // Uniform over [lo, 2lo - 1], one run even for huge anchors.
        let hi = (lo << 1u32) - 1u32;
        budget.check_magnitude(&hi, "average support end")?;
        let w = BigRational::new(BigInt::one(), BigInt::from(lo.clone()));
        return Ok(vec![(IntSpan::new(lo.clone(), hi)?, w)]);
    }
    let m = lo
        .to_u64()
        .ok_or_else(|| Error::budget("interval average part count exceeds machine range"))?;
    let level = a.lambda_approx(m).expect("a >= 1");
    let scale = BigRational::new(BigInt::one(), BigInt::from(m));
    let mut runs = Vec::new();
    let mut q = lo.clone();
    for _ in 0..m {
        let sub = interval_runs(&level, &q, budget)?;
        q = sub.last().expect("nonempty").0.hi.clone() + 1u32;
        budget.check_magnitude(&q, "average support end")?;
        for (span, w) in sub {
            push_run(&mut runs, span, w * &scale)?;
        }
    }
    Ok(runs)
}

fn push_run(runs: &mut Vec<(IntSpan, BigRational)>, span: IntSpan, w: BigRational) -> Result<()> {
    // Merge with the previous run when adjacent and equal-weighted.
    if let Some((last, lw)) = runs.last_mut() {
        if *lw == w && last.hi.clone() + 1u32 == span.lo {
            last.hi = span.hi;
            return Ok(());
        }
    }
    runs.push((span, w));
    if runs.len() > RUN_CAP {
        return Err(Error::budget("average needs too many runs"));
    }
    Ok(())
}

/// The averages over the consecutive maximal interval blocks partitioning
/// `[m, infinity)`, first `count` of them.
pub fn averages_along(
    a: &Ordinal,
    m: &BigUint,
    count: u64,
    budget: &Budget,
) -> Result<Vec<RepeatedAverage>> {
    let mut out = Vec::with_capacity(count as usize);
    let mut q = m.clone();
    for _ in 0..count {
        let avg = interval_average(a, &q, budget)?;
        q = avg.support_max().clone() + 1u32;
        out.push(avg);
    }
    Ok(out)
}

/// The exact double sum of the block averages over `F`. Rejects `F` outside
/// the order-`a` family and blocks that are not strictly ordered.
pub fn block_sum(a: &Ordinal, blocks: &[RepeatedAverage], f: &FiniteSet) -> Result<BigRational> {
    if !schreier::is_member(f, a) {
        return Err(Error::input("F is not in the family"));
    }
    for w in blocks.windows(2) {
        if w[0].support_max() >= w[1].support_min() {
            return Err(Error::input("blocks must be strictly ordered"));
        }
    }
    let mut acc = BigRational::zero();
    for b in blocks {
        acc += b.mass_on_set(f);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u64]) -> FiniteSet {
        FiniteSet::from_u64s(v).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn base_case_and_small_averages() {
        let avg = repeated_average(&Ordinal::zero(), &set(&[7])).unwrap();
        assert_eq!(avg.weight_at(&BigUint::from(7u32)), rat(1, 1));

        let avg = repeated_average(&Ordinal::nat(1), &set(&[2, 3])).unwrap();
        assert_eq!(avg.weight_at(&BigUint::from(2u32)), rat(1, 2));
        assert_eq!(avg.weight_at(&BigUint::from(3u32)), rat(1, 2));

        let avg = repeated_average(&Ordinal::nat(2), &set(&[2, 3, 4, 5, 6, 7])).unwrap();
        let w: Vec<BigRational> = (2u64..8)
            .map(|i| avg.weight_at(&BigUint::from(i)))
            .collect();
        assert_eq!(
            w,
            vec![
                rat(1, 4),
                rat(1, 4),
                rat(1, 8),
                rat(1, 8),
                rat(1, 8),
                rat(1, 8)
            ]
        );
    }

    #[test]
    fn rejects_non_maximal() {
        assert_eq!(
            repeated_average(&Ordinal::nat(2), &set(&[2, 3, 4])),
            Err(Error::NotMaximal)
        );
        assert_eq!(
            repeated_average(&Ordinal::zero(), &set(&[1, 2])),
            Err(Error::NotMaximal)
        );
    }

    #[test]
    fn averages_along_partition() {
        let b = Budget::default();
        let avgs = averages_along(&Ordinal::nat(1), &BigUint::from(2u32), 2, &b).unwrap();
        assert_eq!(avgs[0].support_min(), &BigUint::from(2u32));
        assert_eq!(avgs[0].support_max(), &BigUint::from(3u32));
        assert_eq!(avgs[1].support_min(), &BigUint::from(4u32));
        assert_eq!(avgs[1].support_max(), &BigUint::from(7u32));
        // Consistency with the explicit constructor on the same blocks.
        let e0 = repeated_average(&Ordinal::nat(1), &set(&[2, 3])).unwrap();
        let e1 = repeated_average(&Ordinal::nat(1), &set(&[4, 5, 6, 7])).unwrap();
        assert_eq!(avgs[0], e0);
        assert_eq!(avgs[1], e1);
    }

    #[test]
    fn first_block_from_one_is_a_point() {
        let b = Budget::default();
        for a in [Ordinal::nat(1), Ordinal::nat(2), Ordinal::omega()] {
            let avgs = averages_along(&a, &BigUint::from(1u32), 1, &b).unwrap();
            assert_eq!(avgs[0].support_size(), BigUint::from(1u32));
            assert_eq!(avgs[0].weight_at(&BigUint::from(1u32)), rat(1, 1));
        }
    }

    #[test]
    fn interval_average_with_huge_anchor() {
        let b = Budget::default();
        let lo = BigUint::from(500u32) << 499u32;
        let avg = interval_average(&Ordinal::nat(1), &lo, &b).unwrap();
        assert_eq!(avg.runs().len(), 1);
        assert_eq!(avg.support_size(), lo);
        avg.verify_properties().unwrap();
    }

    #[test]
    fn block_sum_examples() {
        let b = Budget::default();
        let one = Ordinal::nat(1);
        let blocks = averages_along(&one, &BigUint::from(2u32), 2, &b).unwrap();
        let f = set(&[3, 4, 5]);
        assert_eq!(block_sum(&one, &blocks, &f).unwrap(), rat(1, 1));
        // Full support of a single block sums to exactly 1.
        let f = set(&[4, 5, 6, 7]);
        assert_eq!(block_sum(&one, &blocks[1..], &f).unwrap(), rat(1, 1));
        // Empty F sums to 0.
        assert_eq!(
            block_sum(&one, &blocks, &FiniteSet::empty()).unwrap(),
            rat(0, 1)
        );
        // F outside the family is rejected.
        assert!(block_sum(&one, &blocks, &set(&[2, 4, 6])).is_err());
    }

    #[test]
    fn coefficient_decay_across_consecutive_blocks() {
        let b = Budget::default();
        for a in [Ordinal::nat(1), Ordinal::nat(2)] {
            let blocks = averages_along(&a, &BigUint::from(2u32), 3, &b).unwrap();
            for w in blocks.windows(2) {
                assert!(w[1].first_weight() <= w[0].last_weight());
                let size = BigRational::new(BigInt::one(), BigInt::from(w[0].support_size()));
                assert!(w[0].last_weight() <= &size);
            }
        }
    }
}
