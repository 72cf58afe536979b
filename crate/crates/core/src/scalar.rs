//! Exact coefficient scalars of the form `r * q^(1/4)` with `r` rational and
//! `q` a positive rational.
//!
//! This field of values is closed under product, absolute value, squaring and
//! exact comparison, and covers every coefficient the constructions need:
//! plain rationals (`q = 1`), inverse square roots `u^(-1/2) = (u^-2)^(1/4)`,
//! and inverse fourth roots `k^(-1/4)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::real::{Real, RealCtx};

#[derive(Debug, Clone)]
pub struct Scalar {
    r: BigRational,
    q: BigRational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            r: BigRational::zero(),
            q: BigRational::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar {
            r,
            q: BigRational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `r * q^(1/4)`; `q` must be positive.
    pub fn quartic(r: BigRational, q: BigRational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::input("quartic radicand must be positive"));
        }
        if r.is_zero() {
            return Ok(Scalar::zero());
        }
        Ok(Scalar { r, q })
    }

    /// `sqrt(v)` for positive rational `v`.
    pub fn sqrt_of(v: &BigRational) -> Result<Self> {
        Scalar::quartic(BigRational::one(), v * v)
    }

    /// `1 / sqrt(u)` for a positive integer `u`.
    pub fn inv_sqrt_u64(u: u64) -> Self {
        let v = BigRational::new(BigInt::one(), BigInt::from(u) * BigInt::from(u));
        Scalar {
            r: BigRational::one(),
            q: v,
        }
    }

    /// `1 / k^(1/4)` for a positive integer `k`.
    pub fn inv_quartic_u64(k: u64) -> Self {
        Scalar {
            r: BigRational::one(),
            q: BigRational::new(BigInt::one(), BigInt::from(k)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.r.is_negative()
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            r: -self.r.clone(),
            q: self.q.clone(),
        }
    }

    pub fn abs(&self) -> Scalar {
        Scalar {
            r: self.r.abs(),
            q: self.q.clone(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            r: &self.r * &other.r,
            q: &self.q * &other.q,
        }
    }

    pub fn mul_rat(&self, r: &BigRational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            r: &self.r * r,
            q: self.q.clone(),
        }
    }

    /// `self^2 = r^2 * (q^2)^(1/4)`.
    pub fn square(&self) -> Scalar {
        if self.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            r: &self.r * &self.r,
            q: &self.q * &self.q,
        }
    }

    /// Add a scalar sharing the same radicand; `None` when radicands differ
    /// (and neither side is zero).
    pub fn add_same_q(&self, other: &Scalar) -> Option<Scalar> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.q == other.q {
            let r = &self.r + &other.r;
            if r.is_zero() {
                Some(Scalar::zero())
            } else {
                Some(Scalar {
                    r,
                    q: self.q.clone(),
                })
            }
        } else {
            None
        }
    }

    /// Exact rational value when the fourth root collapses.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.r.is_zero() {
            return Some(BigRational::zero());
        }
        if self.q.is_one() {
            return Some(self.r.clone());
        }
        let root = |n: &BigInt| -> Option<BigInt> {
            let r = n.nth_root(4);
            if &r.pow(4) == n {
                Some(r)
            } else {
                None
            }
        };
        let num = root(self.q.numer())?;
        let den = root(self.q.denom())?;
        Some(&self.r * BigRational::new(num, den))
    }

    /// `|self|^2` when it is rational (radicand a perfect square).
    pub fn square_rational(&self) -> Option<BigRational> {
        self.square().as_rational()
    }

    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        let ls = sign_of(&self.r);
        let rs = sign_of(&other.r);
        if ls != rs {
            return ls.cmp(&rs);
        }
        if ls == 0 {
            return Ordering::Equal;
        }
        // Same strict sign: compare |r|^4 q against |r'|^4 q'.
        let lhs = pow4(&self.r) * &self.q;
        let rhs = pow4(&other.r) * &other.q;
        if ls > 0 {
            lhs.cmp(&rhs)
        } else {
            rhs.cmp(&lhs)
        }
    }

    pub fn to_real(&self, ctx: &RealCtx) -> Real {
        if self.is_zero() {
            return Real::zero(ctx);
        }
        let root = Real::from_ratio(&self.q, ctx).fourth_root().expect("q > 0");
        Real::from_ratio(&self.r, ctx).mul(&root)
    }
}

fn sign_of(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn pow4(r: &BigRational) -> BigRational {
    let s = r * r;
    &s * &s
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_one() || self.r.is_zero() {
            write!(f, "{}", self.r)
        } else {
            write!(f, "{}*({})^(1/4)", self.r, self.q)
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `p/q`, `p`, or `p/q*(u/v)^(1/4)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_rat = |t: &str| -> Result<BigRational> {
            let t = t.trim().trim_start_matches('(').trim_end_matches(')');
            if let Some((num, den)) = t.split_once('/') {
                let n: BigInt = num
                    .trim()
                    .parse()
                    .map_err(|_| Error::input("bad rational"))?;
                let d: BigInt = den
                    .trim()
                    .parse()
                    .map_err(|_| Error::input("bad rational"))?;
                if d.is_zero() {
                    return Err(Error::input("zero denominator"));
                }
                Ok(BigRational::new(n, d))
            } else {
                let n: BigInt = t.parse().map_err(|_| Error::input("bad rational"))?;
                Ok(BigRational::from_integer(n))
            }
        };
        if let Some((head, tail)) = s.split_once("*(") {
            let tail = tail
                .strip_suffix(")^(1/4)")
                .ok_or_else(|| Error::input("bad quartic scalar"))?;
            Scalar::quartic(parse_rat(head)?, parse_rat(tail)?)
        } else {
            Ok(Scalar::from_rational(parse_rat(s)?))
        }
    }
}
