//! Finite subsets of the positive integers and inclusive integer spans.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// A finite set of positive integers, stored strictly increasing. May be
/// empty; `min`/`max` are only defined when nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSet {
    elems: Vec<BigUint>,
}

impl FiniteSet {
    pub fn empty() -> Self {
        FiniteSet { elems: Vec::new() }
    }

    pub fn new(elems: Vec<BigUint>) -> Result<Self> {
        if elems.iter().any(|e| e.is_zero_ext()) {
            return Err(Error::input("set elements must be positive"));
        }
        for w in elems.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::input("set elements must be strictly increasing"));
            }
        }
        Ok(FiniteSet { elems })
    }

    pub fn from_u64s(elems: &[u64]) -> Result<Self> {
        FiniteSet::new(elems.iter().map(|&e| BigUint::from(e)).collect())
    }

    /// `[lo, hi]` inclusive; empty when `lo > hi`.
    pub fn interval(lo: u64, hi: u64) -> Self {
        FiniteSet {
            elems: (lo..=hi).map(BigUint::from).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn min(&self) -> Option<&BigUint> {
        self.elems.first()
    }

    pub fn max(&self) -> Option<&BigUint> {
        self.elems.last()
    }

    pub fn elems(&self) -> &[BigUint] {
        &self.elems
    }

    pub fn contains(&self, x: &BigUint) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    /// Append-one-point extension `self U {max + 1}`.
    pub fn extend_right(&self) -> FiniteSet {
        let next = match self.elems.last() {
            Some(m) => m + 1u32,
            None => BigUint::one(),
        };
        let mut elems = self.elems.clone();
        elems.push(next);
        FiniteSet { elems }
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> FiniteSet {
        FiniteSet {
            elems: self.elems[range].to_vec(),
        }
    }

    pub fn subset_of(&self, other: &FiniteSet) -> bool {
        self.elems.iter().all(|e| other.contains(e))
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for FiniteSet {
    type Err = Error;

    /// Accepts a comma list `2,4,6` or an interval `[lo,hi]` with decimal
    /// (possibly huge) endpoints.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(FiniteSet::empty());
        }
        if let Some(body) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let (lo, hi) = body
                .split_once(',')
                .ok_or_else(|| Error::input("interval needs two endpoints"))?;
            let lo: BigUint = lo
                .trim()
                .parse()
                .map_err(|_| Error::input("bad interval endpoint"))?;
            let hi: BigUint = hi
                .trim()
                .parse()
                .map_err(|_| Error::input("bad interval endpoint"))?;
            if lo > hi {
                return Ok(FiniteSet::empty());
            }
            let width = &hi - &lo;
            let width: u64 = width
                .try_into()
                .map_err(|_| Error::budget("interval too wide to materialize"))?;
            if width > 1 << 22 {
                return Err(Error::budget("interval too wide to materialize"));
            }
            let mut elems = Vec::with_capacity(width as usize + 1);
            let mut cur = lo;
            for _ in 0..=width {
                elems.push(cur.clone());
                cur += 1u32;
            }
            return FiniteSet::new(elems);
        }
        let elems: Result<Vec<BigUint>> = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<BigUint>()
                    .map_err(|_| Error::input("bad set element"))
            })
            .collect();
        FiniteSet::new(elems?)
    }
}

/// Inclusive span `[lo, hi]` of positive integers, `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntSpan {
    pub lo: BigUint,
    pub hi: BigUint,
}

impl IntSpan {
    pub fn new(lo: BigUint, hi: BigUint) -> Result<Self> {
        if lo.is_zero_ext() || lo > hi {
            return Err(Error::input("bad span"));
        }
        Ok(IntSpan { lo, hi })
    }

    pub fn point(x: BigUint) -> Self {
        IntSpan {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn len(&self) -> BigUint {
        &self.hi - &self.lo + 1u32
    }

    pub fn contains(&self, x: &BigUint) -> bool {
        *x >= self.lo && *x <= self.hi
    }

    pub fn intersect(&self, other: &IntSpan) -> Option<IntSpan> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo <= hi {
            Some(IntSpan { lo, hi })
        } else {
            None
        }
    }
}

impl fmt::Display for IntSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

trait IsZeroExt {
    fn is_zero_ext(&self) -> bool;
}

impl IsZeroExt for BigUint {
    fn is_zero_ext(&self) -> bool {
        use num_traits::Zero;
        self.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let s: FiniteSet = "2,4,6".parse().unwrap();
        assert_eq!(s, FiniteSet::from_u64s(&[2, 4, 6]).unwrap());
        let t: FiniteSet = "[3,6]".parse().unwrap();
        assert_eq!(t, FiniteSet::interval(3, 6));
        assert!("6,4".parse::<FiniteSet>().is_err());
        assert!("0,1".parse::<FiniteSet>().is_err());
    }

    #[test]
    fn span_ops() {
        let a = IntSpan::new(BigUint::from(2u32), BigUint::from(7u32)).unwrap();
        let b = IntSpan::new(BigUint::from(5u32), BigUint::from(9u32)).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(
            (c.lo.to_string(), c.hi.to_string()),
            ("5".into(), "7".into())
        );
        assert_eq!(a.len(), BigUint::from(6u32));
    }
}
