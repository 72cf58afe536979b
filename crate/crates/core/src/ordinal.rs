//! Ordinals below omega^omega in Cantor normal form, with classification and
//! a fixed approximating-sequence rule for limits.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordinal `sum omega^e_k * c_k` with strictly decreasing exponents and
/// positive coefficients. The empty term list is 0. Exponents are naturals,
/// so everything lives below omega^omega.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

/// Result of [`Ordinal::classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Class {
    Zero,
    Successor(Ordinal),
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(0, n)],
            }
        }
    }

    pub fn omega() -> Self {
        Ordinal {
            terms: vec![(1, 1)],
        }
    }

    /// `omega^exp * coeff`.
    pub fn omega_pow(exp: u32, coeff: u64) -> Self {
        if coeff == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(exp, coeff)],
            }
        }
    }

    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self> {
        for w in terms.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(Error::input("exponents must be strictly decreasing"));
            }
        }
        if terms.iter().any(|&(_, c)| c == 0) {
            return Err(Error::input("coefficients must be positive"));
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the ordinal is a natural number, returning it.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn classify(&self) -> Class {
        match self.terms.last() {
            None => Class::Zero,
            Some(&(0, c)) => {
                let mut pred = self.clone();
                if c == 1 {
                    pred.terms.pop();
                } else {
                    pred.terms.last_mut().unwrap().1 = c - 1;
                }
                Class::Successor(pred)
            }
            Some(_) => Class::Limit,
        }
    }

    pub fn succ(&self) -> Ordinal {
        let mut out = self.clone();
        match out.terms.last_mut() {
            Some(t) if t.0 == 0 => t.1 += 1,
            _ => out.terms.push((0, 1)),
        }
        out
    }

    /// The fixed approximating sequence `lambda(a, i)` used throughout.
    ///
    /// For a successor `a = b + 1` this is `b` for every `i`. For a limit
    /// written `b + omega^k` in normal form (`k >= 1` the last exponent),
    /// it is `b + i` when `k = 1` and `b + omega^(k-1) * i + 1` when
    /// `k >= 2`. Returned values are successors strictly below `a` that
    /// increase with `i`; the family containment this induces is checked by
    /// tests rather than assumed.
    pub fn lambda_approx(&self, i: u64) -> Result<Ordinal> {
        if i == 0 {
            return Err(Error::input("lambda index must be >= 1"));
        }
        match self.classify() {
            Class::Zero => Err(Error::input("lambda undefined at 0")),
            Class::Successor(pred) => Ok(pred),
            Class::Limit => {
                let &(k, c) = self.terms.last().expect("limit has terms");
                debug_assert!(k >= 1);
                // Peel one omega^k off the last term.
                let mut base = self.clone();
                if c == 1 {
                    base.terms.pop();
                } else {
                    base.terms.last_mut().unwrap().1 = c - 1;
                }
                if k == 1 {
                    base.terms.push((0, i));
                    Ok(base)
                } else {
                    base.terms.push((k - 1, i));
                    base.terms.push((0, 1));
                    Ok(base)
                }
            }
        }
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        // Lexicographic on (exponent, coefficient) pairs; a longer prefix of
        // equal terms means the one with more terms is larger.
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl fmt::Display for Ordinal {
    /// Canonical text syntax: `w^2*3+w*1+4`, lowercase `w` for omega.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for &(e, c) in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "w*{c}")?,
                _ => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::input("empty ordinal"));
        }
        if s == "0" {
            return Ok(Ordinal::zero());
        }
        let mut terms = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let (head, coeff) = match part.split_once('*') {
                Some((h, c)) => {
                    let c: u64 = c
                        .trim()
                        .parse()
                        .map_err(|_| Error::input(format!("bad coefficient in `{part}`")))?;
                    (h.trim(), c)
                }
                None => (part, 1),
            };
            let exp: u32 = if head == "w" {
                1
            } else if let Some(e) = head.strip_prefix("w^") {
                e.parse()
                    .map_err(|_| Error::input(format!("bad exponent in `{part}`")))?
            } else {
                // A bare natural: exponent 0 with the head as coefficient.
                let c: u64 = head
                    .parse()
                    .map_err(|_| Error::input(format!("bad term `{part}`")))?;
                if part.contains('*') {
                    return Err(Error::input(format!("bad term `{part}`")));
                }
                terms.push((0u32, c));
                continue;
            };
            terms.push((exp, coeff));
        }
        // Merge duplicate exponents conservatively: reject instead of adding.
        Ordinal::from_terms(terms)
    }
}
