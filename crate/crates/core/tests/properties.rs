//! Property tests for the structural invariants: hereditary and spreading
//! membership, exact scalar algebra against the certified reals, greedy-set
//! validity, serialization round trips, and the order-0 supremum against a
//! definition-literal enumerator.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

use schreierlab_core::budget::Budget;
use schreierlab_core::gauge::desk_profile;
use schreierlab_core::greedy::{greedy_set, is_valid_greedy_set};
use schreierlab_core::ordinal::Ordinal;
use schreierlab_core::real::{Real, RealCtx};
use schreierlab_core::scalar::Scalar;
use schreierlab_core::schreier::is_member;
use schreierlab_core::sets::FiniteSet;
use schreierlab_core::spaces::{Caps, Space};
use schreierlab_core::vector::BlockVector;

fn order_strategy() -> impl Strategy<Value = Ordinal> {
    prop_oneof![
        (1u64..4).prop_map(Ordinal::nat),
        Just(Ordinal::omega()),
        Just("w*1+1".parse().unwrap()),
        Just("w^2".parse().unwrap()),
    ]
}

fn set_from_mask(mask: u16, offset: u64) -> FiniteSet {
    let elems: Vec<u64> = (0..12)
        .filter(|j| mask >> j & 1 == 1)
        .map(|j| j as u64 + 1 + offset)
        .collect();
    FiniteSet::from_u64s(&elems).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn membership_is_hereditary(mask: u16, drop_idx in 0usize..12, order in order_strategy()) {
        let e = set_from_mask(mask, 0);
        prop_assume!(is_member(&e, &order) && !e.is_empty());
        let keep: Vec<BigUint> = e
            .elems()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop_idx % e.len())
            .map(|(_, v)| v.clone())
            .collect();
        let sub = FiniteSet::new(keep).unwrap();
        prop_assert!(is_member(&sub, &order), "subset of {e} left the family");
    }

    #[test]
    fn membership_is_spreading(mask: u16, shift in 1u64..6, order in order_strategy()) {
        let e = set_from_mask(mask, 0);
        prop_assume!(is_member(&e, &order));
        let moved: Vec<u64> = e
            .elems()
            .iter()
            .map(|v| u64::try_from(v.clone()).unwrap() + shift)
            .collect();
        let spread = FiniteSet::from_u64s(&moved).unwrap();
        prop_assert!(is_member(&spread, &order), "spread of {e} left the family");
    }

    #[test]
    fn scalar_comparison_matches_reals(
        r1 in -20i64..20, q1 in 1i64..12,
        r2 in -20i64..20, q2 in 1i64..12,
    ) {
        let a = Scalar::quartic(
            BigRational::new(BigInt::from(r1), BigInt::from(3)),
            BigRational::new(BigInt::from(q1), BigInt::from(2)),
        ).unwrap();
        let b = Scalar::quartic(
            BigRational::new(BigInt::from(r2), BigInt::from(5)),
            BigRational::new(BigInt::from(q2), BigInt::from(3)),
        ).unwrap();
        let ctx = RealCtx::new(128);
        let (ra, rb) = (a.to_real(&ctx), b.to_real(&ctx));
        match a.cmp_value(&b) {
            std::cmp::Ordering::Less => prop_assert!(ra.check_le(&rb).verified_within_envelope()),
            std::cmp::Ordering::Greater => prop_assert!(rb.check_le(&ra).verified_within_envelope()),
            std::cmp::Ordering::Equal => {
                prop_assert!(ra.check_le(&rb).verified_within_envelope());
                prop_assert!(rb.check_le(&ra).verified_within_envelope());
            }
        }
    }

    #[test]
    fn real_arithmetic_contains_exact_value(
        an in -40i64..40, ad in 1i64..20,
        bn in -40i64..40, bd in 1i64..20,
        op in 0u8..4,
    ) {
        let ctx = RealCtx::new(96);
        let a = BigRational::new(BigInt::from(an), BigInt::from(ad));
        let b = BigRational::new(BigInt::from(bn), BigInt::from(bd));
        let (ra, rb) = (Real::from_ratio(&a, &ctx), Real::from_ratio(&b, &ctx));
        let (got, want) = match op {
            0 => (ra.add(&rb), &a + &b),
            1 => (ra.sub(&rb), &a - &b),
            2 => (ra.mul(&rb), &a * &b),
            _ => {
                prop_assume!(bn > 0);
                (ra.div(&rb).unwrap(), &a / &b)
            }
        };
        prop_assert!(got.contains_rational(&want), "{want} escaped the enclosure");
    }

    #[test]
    fn greedy_sets_satisfy_the_defining_inequality(
        coords in prop::collection::vec((1u64..200, -9i64..9), 1..6),
    ) {
        let mut points = Vec::new();
        let mut pos = 0u64;
        for (gap, num) in coords {
            pos += gap;
            if num != 0 {
                points.push((
                    BigUint::from(pos),
                    Scalar::from_rational(BigRational::new(num.into(), 4.into())),
                ));
            }
        }
        prop_assume!(!points.is_empty());
        let x = BlockVector::from_points(points).unwrap();
        let n = u64::try_from(x.support_size()).unwrap();
        for m in 0..=n {
            let g = greedy_set(&x, m).unwrap();
            prop_assert!(is_valid_greedy_set(&x, &g));
            prop_assert_eq!(g.len() as u64, m);
        }
    }

    #[test]
    fn block_vector_jsonl_round_trip(
        coords in prop::collection::vec((1u64..50, 1u64..9, -7i64..8, 1u64..5), 1..5),
    ) {
        use schreierlab_core::sets::IntSpan;
        use schreierlab_core::vector::{Seg, SegKind};
        let mut segs = Vec::new();
        let mut pos = 0u64;
        for (gap, len, num, root) in coords {
            pos += gap;
            if num == 0 {
                continue;
            }
            let v = Scalar::quartic(
                BigRational::new(num.into(), 3.into()),
                BigRational::new(root.into(), 2.into()),
            )
            .unwrap();
            let kind = if root % 2 == 0 { SegKind::Alt(v) } else { SegKind::Const(v) };
            segs.push(Seg {
                span: IntSpan::new(BigUint::from(pos), BigUint::from(pos + len - 1)).unwrap(),
                kind,
            });
            pos += len;
        }
        let x = BlockVector::new(segs).unwrap();
        let mut buf = Vec::new();
        x.write_jsonl(&mut buf).unwrap();
        let back = BlockVector::read_jsonl(std::io::Cursor::new(buf)).unwrap();
        prop_assert_eq!(back, x);
    }
}

/// Definition-literal order-0 supremum: scan every target size directly.
fn order0_literal(entries: &[(BigUint, Scalar)], space: &Space) -> Real {
    let ctx = *space.ctx();
    let p = space.profile().unwrap();
    let mut best = Real::zero(&ctx);
    // For every target size t, the best target keeps the t largest moduli
    // among positions >= t.
    let max_pos = entries.iter().map(|(p, _)| p.clone()).max().unwrap();
    let mut t = BigUint::from(1u32);
    while t <= max_pos {
        let mut vals: Vec<Real> = entries
            .iter()
            .filter(|(pos, _)| *pos >= t)
            .map(|(_, v)| v.abs().to_real(&ctx))
            .collect();
        vals.sort_by(|a, b| b.to_f64().partial_cmp(&a.to_f64()).unwrap());
        let t_u = u64::try_from(t.clone()).unwrap();
        let mut acc = Real::zero(&ctx);
        for (i, v) in vals.iter().enumerate() {
            if (i as u64) >= t_u {
                break;
            }
            acc = acc.add(v);
            let phi = p.phi_int(&BigUint::from(i as u64 + 1)).unwrap();
            // Value with s = i+1 slots filled: phi(s)/s * acc; targets padded
            // beyond the kept values never help, so s = kept count.
            let cand = phi
                .mul(&acc)
                .div(&Real::from_u64(i as u64 + 1, &ctx))
                .unwrap();
            // Only legal when the kept positions are >= s; since they are
            // >= t >= ... enforce t >= s.
            if BigUint::from(i as u64 + 1) <= t {
                best = best.max_with(&cand);
            }
        }
        t += 1u32;
    }
    best
}

#[test]
fn order0_supremum_matches_literal_enumeration() {
    use rand::{Rng, SeedableRng};
    let budget = Budget::default();
    let space = Space::section_three(desk_profile(&budget).unwrap(), Caps::default());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let n = rng.random_range(1..=8usize);
        let mut points = Vec::new();
        let mut pos = 0u64;
        for _ in 0..n {
            pos += rng.random_range(1..=6u64);
            let num = rng.random_range(-8..9i64);
            if num != 0 {
                points.push((
                    BigUint::from(pos),
                    Scalar::from_rational(BigRational::new(num.into(), 2.into())),
                ));
            }
        }
        if points.is_empty() {
            continue;
        }
        let x = BlockVector::from_points(points.clone()).unwrap();
        let literal = order0_literal(&points, &space);
        let computed = &space.components(&x).unwrap()[0].value;
        assert!(
            computed.check_le(&literal).verified_within_envelope()
                && literal.check_le(computed).verified_within_envelope(),
            "literal {} vs computed {} on {:?}",
            literal.to_decimal(12),
            computed.to_decimal(12),
            points
                .iter()
                .map(|(p, v)| format!("{p}:{v}"))
                .collect::<Vec<_>>()
        );
    }
}
