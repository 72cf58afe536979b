//! Finitely supported vectors in run-length block form.
//!
//! A vector is a sorted list of disjoint segments; each segment carries a
//! constant or alternating exact scalar over an integer span. Witness vectors
//! with astronomically large supports have tiny descriptions here, and every
//! norm evaluation reduces to per-segment closed forms.

use std::io::{BufRead, Write};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sets::{FiniteSet, IntSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegKind {
    /// Value `s` at every index of the span.
    Const(Scalar),
    /// Value `s * (-1)^i` at index `i`.
    Alt(Scalar),
}

impl SegKind {
    pub fn scalar(&self) -> &Scalar {
        match self {
            SegKind::Const(s) | SegKind::Alt(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seg {
    pub span: IntSpan,
    pub kind: SegKind,
}

impl Seg {
    pub fn value_at(&self, i: &BigUint) -> Scalar {
        debug_assert!(self.span.contains(i));
        match &self.kind {
            SegKind::Const(s) => s.clone(),
            SegKind::Alt(s) => {
                if (i % 2u32).is_zero() {
                    s.clone()
                } else {
                    s.neg()
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockVector {
    segs: Vec<Seg>,
}

impl BlockVector {
    pub fn zero() -> Self {
        BlockVector { segs: Vec::new() }
    }

    pub fn new(mut segs: Vec<Seg>) -> Result<Self> {
        segs.retain(|s| !s.kind.scalar().is_zero());
        segs.sort_by(|a, b| a.span.lo.cmp(&b.span.lo));
        for w in segs.windows(2) {
            if w[0].span.hi >= w[1].span.lo {
                return Err(Error::input("segments overlap"));
            }
        }
        // Canonical form: merge adjacent segments with the same pattern. An
        // alternating value depends only on index parity, so adjacency is
        // enough there too.
        let mut merged: Vec<Seg> = Vec::with_capacity(segs.len());
        for seg in segs {
            if let Some(last) = merged.last_mut() {
                if last.span.hi.clone() + 1u32 == seg.span.lo && last.kind == seg.kind {
                    last.span.hi = seg.span.hi;
                    continue;
                }
            }
            merged.push(seg);
        }
        Ok(BlockVector { segs: merged })
    }

    pub fn from_points(points: Vec<(BigUint, Scalar)>) -> Result<Self> {
        let segs = points
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(p, v)| Seg {
                span: IntSpan::point(p),
                kind: SegKind::Const(v),
            })
            .collect();
        BlockVector::new(segs)
    }

    /// Indicator of an inclusive span.
    pub fn indicator_span(lo: BigUint, hi: BigUint) -> Result<Self> {
        BlockVector::new(vec![Seg {
            span: IntSpan::new(lo, hi)?,
            kind: SegKind::Const(Scalar::one()),
        }])
    }

    pub fn indicator_set(set: &FiniteSet) -> Self {
        let points = set
            .elems()
            .iter()
            .map(|e| (e.clone(), Scalar::one()))
            .collect();
        BlockVector::from_points(points).expect("strictly increasing")
    }

    pub fn segs(&self) -> &[Seg] {
        &self.segs
    }

    pub fn is_zero(&self) -> bool {
        self.segs.is_empty()
    }

    pub fn support_size(&self) -> BigUint {
        self.segs
            .iter()
            .fold(BigUint::zero(), |acc, s| acc + s.span.len())
    }

    pub fn min_pos(&self) -> Option<&BigUint> {
        self.segs.first().map(|s| &s.span.lo)
    }

    pub fn max_pos(&self) -> Option<&BigUint> {
        self.segs.last().map(|s| &s.span.hi)
    }

    pub fn value_at(&self, i: &BigUint) -> Scalar {
        for s in &self.segs {
            if s.span.contains(i) {
                return s.value_at(i);
            }
        }
        Scalar::zero()
    }

    /// True supremum of coordinate moduli, exactly.
    pub fn max_abs(&self) -> Scalar {
        let mut best = Scalar::zero();
        for s in &self.segs {
            let a = s.kind.scalar().abs();
            if a.cmp_value(&best) == std::cmp::Ordering::Greater {
                best = a;
            }
        }
        best
    }

    /// All coordinates rational (no surd values)?
    pub fn is_rational(&self) -> bool {
        self.segs
            .iter()
            .all(|s| s.kind.scalar().as_rational().is_some())
    }

    /// Materialize the entries; errors beyond `cap` entries.
    pub fn entries(&self, cap: usize) -> Result<Vec<(BigUint, Scalar)>> {
        let n = self.support_size();
        let n: usize = n
            .try_into()
            .map_err(|_| Error::budget("support too large to materialize"))?;
        if n > cap {
            return Err(Error::CapExceeded {
                what: "materialized support",
                cap,
                got: n,
            });
        }
        let mut out = Vec::with_capacity(n);
        for s in &self.segs {
            let mut i = s.span.lo.clone();
            while i <= s.span.hi {
                out.push((i.clone(), s.value_at(&i)));
                i += 1u32;
            }
        }
        Ok(out)
    }

    pub fn support_set(&self, cap: usize) -> Result<FiniteSet> {
        let elems = self.entries(cap)?.into_iter().map(|(p, _)| p).collect();
        FiniteSet::new(elems)
    }

    /// Restriction to the positions of `a` (projection onto `a`).
    pub fn project_set(&self, a: &FiniteSet) -> BlockVector {
        let points = a
            .elems()
            .iter()
            .map(|p| (p.clone(), self.value_at(p)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        BlockVector::from_points(points).expect("increasing")
    }

    /// Restriction to the complement of `a`.
    pub fn project_off_set(&self, a: &FiniteSet) -> BlockVector {
        let mut segs = Vec::new();
        for s in &self.segs {
            // Split the span at the excluded points it contains.
            let mut cuts: Vec<&BigUint> = a.elems().iter().filter(|p| s.span.contains(p)).collect();
            cuts.sort();
            let mut lo = s.span.lo.clone();
            for c in cuts {
                if *c > lo {
                    segs.push(Seg {
                        span: IntSpan::new(lo.clone(), c - 1u32).expect("lo<=c-1"),
                        kind: s.kind.clone(),
                    });
                }
                lo = c + 1u32;
            }
            if lo <= s.span.hi {
                segs.push(Seg {
                    span: IntSpan::new(lo, s.span.hi.clone()).expect("ordered"),
                    kind: s.kind.clone(),
                });
            }
        }
        BlockVector::new(segs).expect("disjoint by construction")
    }

    /// Restriction to positions `<= i0`.
    pub fn truncate_at(&self, i0: &BigUint) -> BlockVector {
        let mut segs = Vec::new();
        for s in &self.segs {
            if s.span.lo > *i0 {
                break;
            }
            let hi = s.span.hi.clone().min(i0.clone());
            segs.push(Seg {
                span: IntSpan::new(s.span.lo.clone(), hi).expect("ordered"),
                kind: s.kind.clone(),
            });
        }
        BlockVector { segs }
    }

    pub fn scale_rat(&self, r: &BigRational) -> BlockVector {
        if r.is_zero() {
            return BlockVector::zero();
        }
        let segs = self
            .segs
            .iter()
            .map(|s| Seg {
                span: s.span.clone(),
                kind: match &s.kind {
                    SegKind::Const(v) => SegKind::Const(v.mul_rat(r)),
                    SegKind::Alt(v) => SegKind::Alt(v.mul_rat(r)),
                },
            })
            .collect();
        BlockVector { segs }
    }

    pub fn negate(&self) -> BlockVector {
        let segs = self
            .segs
            .iter()
            .map(|s| Seg {
                span: s.span.clone(),
                kind: match &s.kind {
                    SegKind::Const(v) => SegKind::Const(v.neg()),
                    SegKind::Alt(v) => SegKind::Alt(v.neg()),
                },
            })
            .collect();
        BlockVector { segs }
    }

    /// Pointwise sum, materializing; errors when the combined support
    /// exceeds `cap`.
    pub fn add_explicit(&self, other: &BlockVector, cap: usize) -> Result<BlockVector> {
        let mut a = self.entries(cap)?;
        let b = other.entries(cap)?;
        for (p, v) in b {
            match a.binary_search_by(|(q, _)| q.cmp(&p)) {
                Ok(idx) => {
                    let cur = &a[idx].1;
                    let sum = cur.add_same_q(&v).ok_or_else(|| {
                        Error::input("sum of incompatible surds is not representable")
                    })?;
                    a[idx].1 = sum;
                }
                Err(idx) => a.insert(idx, (p, v)),
            }
        }
        BlockVector::from_points(a)
    }

    /// JSON-lines serialization, one segment per line:
    /// `{"lo": "...", "hi": "...", "pattern": "const|alt", "value": "..."}`.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for s in &self.segs {
            let (pattern, value) = match &s.kind {
                SegKind::Const(v) => ("const", v.to_string()),
                SegKind::Alt(v) => ("alt", v.to_string()),
            };
            let line = serde_json::json!({
                "lo": s.span.lo.to_string(),
                "hi": s.span.hi.to_string(),
                "pattern": pattern,
                "value": value,
            });
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<BlockVector> {
        let mut segs = Vec::new();
        for line in r.lines() {
            let line = line.map_err(|e| Error::input(format!("io: {e}")))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: serde_json::Value =
                serde_json::from_str(line).map_err(|e| Error::input(format!("bad json: {e}")))?;
            let get = |k: &str| -> Result<String> {
                Ok(v.get(k)
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| Error::input(format!("missing field {k}")))?
                    .to_string())
            };
            let lo: BigUint = get("lo")?.parse().map_err(|_| Error::input("bad lo"))?;
            let hi: BigUint = get("hi")?.parse().map_err(|_| Error::input("bad hi"))?;
            let value: Scalar = get("value")?.parse()?;
            let kind = match get("pattern")?.as_str() {
                "const" => SegKind::Const(value),
                "alt" => SegKind::Alt(value),
                other => return Err(Error::input(format!("bad pattern `{other}`"))),
            };
            segs.push(Seg {
                span: IntSpan::new(lo, hi)?,
                kind,
            });
        }
        BlockVector::new(segs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn alternating_signs() {
        let v = BlockVector::new(vec![Seg {
            span: IntSpan::new(big(4), big(7)).unwrap(),
            kind: SegKind::Alt(Scalar::one()),
        }])
        .unwrap();
        assert_eq!(v.value_at(&big(4)), Scalar::one());
        assert_eq!(v.value_at(&big(5)), Scalar::from_int(-1));
        assert_eq!(v.value_at(&big(8)), Scalar::zero());
        assert_eq!(v.support_size(), big(4));
    }

    #[test]
    fn projection_splits_runs() {
        let v = BlockVector::indicator_span(big(2), big(9)).unwrap();
        let a = FiniteSet::from_u64s(&[3, 7]).unwrap();
        let on = v.project_set(&a);
        assert_eq!(on.support_size(), big(2));
        let off = v.project_off_set(&a);
        assert_eq!(off.support_size(), big(6));
        assert!(off.value_at(&big(3)).is_zero());
        assert_eq!(off.value_at(&big(4)), Scalar::one());
        // Reconstruction.
        let back = on.add_explicit(&off, 100).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn truncation() {
        let v = BlockVector::indicator_span(big(10), big(20)).unwrap();
        assert_eq!(v.truncate_at(&big(14)).support_size(), big(5));
        assert!(v.truncate_at(&big(9)).is_zero());
    }

    #[test]
    fn scaling_and_max_abs() {
        let v = BlockVector::from_points(vec![
            (big(3), Scalar::from_rational(rat(1, 2))),
            (big(5), Scalar::from_rational(rat(-3, 4))),
        ])
        .unwrap();
        assert_eq!(v.max_abs(), Scalar::from_rational(rat(3, 4)));
        let w = v.scale_rat(&rat(-2, 1));
        assert_eq!(w.value_at(&big(5)), Scalar::from_rational(rat(3, 2)));
    }

    #[test]
    fn jsonl_round_trip() {
        let v = BlockVector::new(vec![
            Seg {
                span: IntSpan::new(big(2), big(3)).unwrap(),
                kind: SegKind::Const(Scalar::from_rational(rat(1, 3))),
            },
            Seg {
                span: IntSpan::new(big(8), big(15)).unwrap(),
                kind: SegKind::Alt(Scalar::inv_sqrt_u64(2)),
            },
        ])
        .unwrap();
        let mut buf = Vec::new();
        v.write_jsonl(&mut buf).unwrap();
        let back = BlockVector::read_jsonl(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(v, back);
    }
}
