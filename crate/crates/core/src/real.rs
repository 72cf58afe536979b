//! Certified real arithmetic: dyadic intervals with outward rounding at a
//! configurable binary precision.
//!
//! Every `Real` is an enclosure `[lo, hi]` of the mathematical value by
//! dyadic rationals `m * 2^e`. Exact operations (add, sub, mul on dyadics)
//! are performed exactly and then rounded outward to the working precision;
//! division, square roots and logarithms are computed with directed rounding
//! plus an analytic tail bound. An inequality between two `Real`s is only
//! *proved* when the enclosures separate.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Round {
    Down,
    Up,
}

/// A dyadic rational `m * 2^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    fn zero() -> Self {
        Dyadic {
            m: BigInt::zero(),
            e: 0,
        }
    }

    fn from_bigint(m: BigInt) -> Self {
        Dyadic { m, e: 0 }
    }

    fn normalize(mut self) -> Self {
        if self.m.is_zero() {
            self.e = 0;
            return self;
        }
        let tz = self.m.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.m >>= tz;
            self.e += tz as i64;
        }
        self
    }

    fn bits(&self) -> u64 {
        self.m.bits()
    }

    /// Round to `prec` significant bits in the given direction.
    fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.bits();
        if bits <= prec as u64 {
            return self.clone().normalize();
        }
        let drop = (bits - prec as u64) as i64;
        let m = shift_right_dir(&self.m, drop as u64, dir);
        Dyadic {
            m,
            e: self.e + drop,
        }
        .normalize()
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.e.min(other.e);
        let a = &self.m << (self.e - e) as u64;
        let b = &other.m << (other.e - e) as u64;
        Dyadic { m: a + b, e }.normalize()
    }

    fn neg(&self) -> Dyadic {
        Dyadic {
            m: -&self.m,
            e: self.e,
        }
    }

    fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic {
            m: &self.m * &other.m,
            e: self.e + other.e,
        }
        .normalize()
    }

    fn cmp_value(&self, other: &Dyadic) -> Ordering {
        let ls = self.m.sign();
        let rs = other.m.sign();
        if ls != rs {
            return match (ls, rs) {
                (Sign::Minus, _) => Ordering::Less,
                (Sign::Plus, _) => Ordering::Greater,
                (Sign::NoSign, Sign::Plus) => Ordering::Less,
                (Sign::NoSign, Sign::Minus) => Ordering::Greater,
                _ => Ordering::Equal,
            };
        }
        let e = self.e.min(other.e);
        let a = &self.m << (self.e - e) as u64;
        let b = &other.m << (other.e - e) as u64;
        a.cmp(&b)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.e >= 0 {
            BigRational::from_integer(&self.m << self.e as u64)
        } else {
            BigRational::new(self.m.clone(), BigInt::one() << (-self.e) as u64)
        }
    }

    fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// Hex-float form `±0xMMMpEE` (mantissa hex, exponent decimal).
    pub fn to_hex(&self) -> String {
        let sign = if self.m.is_negative() { "-" } else { "" };
        format!("{}0x{:x}p{}", sign, self.m.magnitude(), self.e)
    }

    pub fn from_hex(s: &str) -> Result<Dyadic> {
        let (sign, rest) = match s.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, s),
        };
        let rest = rest
            .strip_prefix("0x")
            .ok_or_else(|| Error::input("bad hex float"))?;
        let (mant, exp) = rest
            .split_once('p')
            .ok_or_else(|| Error::input("bad hex float"))?;
        let m = BigUint::parse_bytes(mant.as_bytes(), 16)
            .ok_or_else(|| Error::input("bad hex mantissa"))?;
        let e: i64 = exp.parse().map_err(|_| Error::input("bad hex exponent"))?;
        let m = BigInt::from_biguint(if sign < 0 { Sign::Minus } else { Sign::Plus }, m);
        Ok(Dyadic { m, e })
    }
}

fn shift_right_dir(m: &BigInt, s: u64, dir: Round) -> BigInt {
    match dir {
        // BigInt shr rounds toward negative infinity, which is exactly Down.
        Round::Down => m >> s,
        Round::Up => -(&(-m) >> s),
    }
}

fn div_dir(p: &BigInt, q: &BigInt, dir: Round) -> BigInt {
    debug_assert!(q.is_positive());
    match dir {
        Round::Down => p.div_floor(q),
        Round::Up => -(&(-p).div_floor(q)),
    }
}

/// Round `p/q` (q > 0) to roughly `prec` significant bits.
fn ratio_to_dyadic(p: &BigInt, q: &BigInt, prec: u32, dir: Round) -> Dyadic {
    if p.is_zero() {
        return Dyadic::zero();
    }
    let e = p.bits() as i64 - q.bits() as i64 - prec as i64 - 2;
    let n = if e >= 0 {
        div_dir(p, &(q << e as u64), dir)
    } else {
        div_dir(&(p << (-e) as u64), q, dir)
    };
    Dyadic { m: n, e }.round(prec, dir)
}

/// Computation context: the working precision in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealCtx {
    pub prec: u32,
}

impl RealCtx {
    pub fn new(prec: u32) -> Self {
        RealCtx { prec: prec.max(16) }
    }
}

impl Default for RealCtx {
    fn default() -> Self {
        RealCtx { prec: 256 }
    }
}

/// Certified enclosure of a real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Real {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Real {
    fn make(lo: Dyadic, hi: Dyadic, prec: u32) -> Real {
        let lo = lo.round(prec, Round::Down);
        let hi = hi.round(prec, Round::Up);
        debug_assert!(lo.cmp_value(&hi) != Ordering::Greater);
        Real { lo, hi, prec }
    }

    pub fn zero(ctx: &RealCtx) -> Real {
        Real {
            lo: Dyadic::zero(),
            hi: Dyadic::zero(),
            prec: ctx.prec,
        }
    }

    pub fn from_u64(v: u64, ctx: &RealCtx) -> Real {
        Real::from_bigint(BigInt::from(v), ctx)
    }

    pub fn from_i64(v: i64, ctx: &RealCtx) -> Real {
        Real::from_bigint(BigInt::from(v), ctx)
    }

    pub fn from_biguint(v: &BigUint, ctx: &RealCtx) -> Real {
        Real::from_bigint(BigInt::from(v.clone()), ctx)
    }

    pub fn from_bigint(v: BigInt, ctx: &RealCtx) -> Real {
        let d = Dyadic::from_bigint(v);
        Real::make(d.clone(), d, ctx.prec)
    }

    pub fn from_ratio(r: &BigRational, ctx: &RealCtx) -> Real {
        let lo = ratio_to_dyadic(r.numer(), r.denom(), ctx.prec, Round::Down);
        let hi = ratio_to_dyadic(r.numer(), r.denom(), ctx.prec, Round::Up);
        Real {
            lo,
            hi,
            prec: ctx.prec,
        }
    }

    /// `a / b` for big unsigned integers, as a certified enclosure.
    pub fn ratio_of_ints(a: &BigUint, b: &BigUint, ctx: &RealCtx) -> Real {
        let p = BigInt::from(a.clone());
        let q = BigInt::from(b.clone());
        Real {
            lo: ratio_to_dyadic(&p, &q, ctx.prec, Round::Down),
            hi: ratio_to_dyadic(&p, &q, ctx.prec, Round::Up),
            prec: ctx.prec,
        }
    }

    pub fn from_dyadic_bounds(lo: Dyadic, hi: Dyadic, prec: u32) -> Real {
        Real::make(lo, hi, prec)
    }

    pub fn lo_dyadic(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi_dyadic(&self) -> &Dyadic {
        &self.hi
    }

    pub fn add(&self, other: &Real) -> Real {
        Real::make(self.lo.add(&other.lo), self.hi.add(&other.hi), self.prec)
    }

    pub fn sub(&self, other: &Real) -> Real {
        Real::make(
            self.lo.add(&other.hi.neg()),
            self.hi.add(&other.lo.neg()),
            self.prec,
        )
    }

    pub fn neg(&self) -> Real {
        Real {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        let cands = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp_value(&lo) == Ordering::Less {
                lo = c.clone();
            }
            if c.cmp_value(&hi) == Ordering::Greater {
                hi = c.clone();
            }
        }
        Real::make(lo, hi, self.prec)
    }

    pub fn square(&self) -> Real {
        let a2 = self.lo.mul(&self.lo);
        let b2 = self.hi.mul(&self.hi);
        if !self.lo.m.is_negative() {
            Real::make(a2, b2, self.prec)
        } else if !self.hi.m.is_positive() {
            Real::make(b2, a2, self.prec)
        } else {
            let hi = if a2.cmp_value(&b2) == Ordering::Greater {
                a2
            } else {
                b2
            };
            Real::make(Dyadic::zero(), hi, self.prec)
        }
    }

    /// Division; the divisor interval must be strictly positive.
    pub fn div(&self, other: &Real) -> Result<Real> {
        if !other.lo.m.is_positive() {
            return Err(Error::input(
                "division by an interval not strictly positive",
            ));
        }
        let q = |x: &Dyadic, y: &Dyadic, dir: Round| -> Dyadic {
            // x/y = (mx * 2^(ex - ey)) / my as an integer ratio.
            let shift = x.e - y.e;
            let (mut p, mut qd) = (x.m.clone(), y.m.clone());
            if shift >= 0 {
                p <<= shift as u64;
            } else {
                qd <<= (-shift) as u64;
            }
            ratio_to_dyadic(&p, &qd, self.prec, dir)
        };
        let lo = if self.lo.m.is_negative() {
            q(&self.lo, &other.lo, Round::Down)
        } else {
            q(&self.lo, &other.hi, Round::Down)
        };
        let hi = if self.hi.m.is_negative() {
            q(&self.hi, &other.hi, Round::Up)
        } else {
            q(&self.hi, &other.lo, Round::Up)
        };
        Ok(Real {
            lo,
            hi,
            prec: self.prec,
        })
    }

    /// Square root; the interval must be nonnegative.
    pub fn sqrt(&self) -> Result<Real> {
        if self.lo.m.is_negative() {
            return Err(Error::input("sqrt of a possibly negative value"));
        }
        Ok(Real {
            lo: sqrt_dir(&self.lo, self.prec, Round::Down),
            hi: sqrt_dir(&self.hi, self.prec, Round::Up),
            prec: self.prec,
        })
    }

    pub fn fourth_root(&self) -> Result<Real> {
        self.sqrt()?.sqrt()
    }

    /// Natural logarithm; the interval must be strictly positive.
    pub fn ln(&self) -> Result<Real> {
        if !self.lo.m.is_positive() {
            return Err(Error::input("ln of a value not strictly positive"));
        }
        Ok(Real {
            lo: ln_dir(&self.lo, self.prec, Round::Down),
            hi: ln_dir(&self.hi, self.prec, Round::Up),
            prec: self.prec,
        })
    }

    pub fn abs(&self) -> Real {
        if !self.lo.m.is_negative() {
            self.clone()
        } else if !self.hi.m.is_positive() {
            self.neg()
        } else {
            let hi = if self.lo.neg().cmp_value(&self.hi) == Ordering::Greater {
                self.lo.neg()
            } else {
                self.hi.clone()
            };
            Real {
                lo: Dyadic::zero(),
                hi,
                prec: self.prec,
            }
        }
    }

    /// Enclosure of `max(x, y)`.
    pub fn max_with(&self, other: &Real) -> Real {
        let lo = if self.lo.cmp_value(&other.lo) == Ordering::Greater {
            self.lo.clone()
        } else {
            other.lo.clone()
        };
        let hi = if self.hi.cmp_value(&other.hi) == Ordering::Greater {
            self.hi.clone()
        } else {
            other.hi.clone()
        };
        Real {
            lo,
            hi,
            prec: self.prec,
        }
    }

    pub fn scale_rat(&self, r: &BigRational, ctx: &RealCtx) -> Real {
        self.mul(&Real::from_ratio(r, ctx))
    }

    pub fn width(&self) -> Real {
        Real::make(Dyadic::zero(), self.hi.add(&self.lo.neg()), self.prec)
    }

    pub fn is_same_interval(&self, other: &Real) -> bool {
        self.lo == other.lo && self.hi == other.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.to_rational() <= *r && *r <= self.hi.to_rational()
    }

    pub fn definitely_positive(&self) -> bool {
        self.lo.m.is_positive()
    }

    pub fn definitely_nonnegative(&self) -> bool {
        !self.lo.m.is_negative()
    }

    /// Certified `self <= other`?
    pub fn check_le(&self, other: &Real) -> Check {
        if self.is_same_interval(other) {
            return Check::Touching;
        }
        if self.hi.cmp_value(&other.lo) != Ordering::Greater {
            return Check::Proved;
        }
        if self.lo.cmp_value(&other.hi) == Ordering::Greater {
            return Check::Refuted;
        }
        Check::WithinEnvelope
    }

    pub fn check_ge(&self, other: &Real) -> Check {
        other.check_le(self)
    }

    /// Certified strict `self < other` (never Touching).
    pub fn check_lt(&self, other: &Real) -> Check {
        if self.hi.cmp_value(&other.lo) == Ordering::Less {
            Check::Proved
        } else if self.lo.cmp_value(&other.hi) != Ordering::Less {
            Check::Refuted
        } else {
            Check::WithinEnvelope
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mid = self.lo.add(&self.hi);
        let r = mid.to_rational() / BigRational::from_integer(BigInt::from(2));
        r.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering of the midpoint with `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        let mid = self.lo.add(&self.hi).to_rational() / BigRational::from_integer(BigInt::from(2));
        rational_to_decimal(&mid, sig)
    }

    pub fn to_hex_pair(&self) -> (String, String) {
        (self.lo.to_hex(), self.hi.to_hex())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(24))
    }
}

pub fn rational_to_decimal(r: &BigRational, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // Scale into [10^(sig-1), 10^sig) and remember the decimal exponent.
    let ten = BigInt::from(10);
    let mut exp10: i64 = 0;
    let mut num = a.numer().clone();
    let mut den = a.denom().clone();
    while num.clone() / &den >= ten.pow(sig as u32) {
        den *= &ten;
        exp10 += 1;
    }
    while num.clone() / &den < ten.pow(sig as u32 - 1) {
        num *= &ten;
        exp10 -= 1;
    }
    let digits = (num / den).to_string();
    let point_at = digits.len() as i64 + exp10;
    let sign = if neg { "-" } else { "" };
    if point_at <= 0 && point_at > -6 {
        let frac = digits.trim_end_matches('0');
        let zeros = "0".repeat((-point_at) as usize);
        return format!("{sign}0.{zeros}{frac}");
    }
    if point_at > 0 && point_at <= digits.len() as i64 {
        let (int, frac) = digits.split_at(point_at as usize);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    } else {
        // Scientific notation.
        let (first, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        let e = point_at - 1;
        if rest.is_empty() {
            format!("{sign}{first}e{e}")
        } else {
            format!("{sign}{first}.{rest}e{e}")
        }
    }
}

/// Outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    /// Holds with margin above the rounding envelope.
    Proved,
    /// Both sides are the identical enclosure (equality by construction).
    Touching,
    /// Neither provable nor refutable at this precision: the claim holds
    /// within the rounding envelope.
    WithinEnvelope,
    /// The claimed inequality is false with margin.
    Refuted,
}

impl Check {
    /// Verified strictly: margin above the envelope, or bit-identical sides.
    pub fn verified(self) -> bool {
        matches!(self, Check::Proved | Check::Touching)
    }

    /// Verified allowing equality within the rounding envelope.
    pub fn verified_within_envelope(self) -> bool {
        !matches!(self, Check::Refuted)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Check::Proved => "proved",
            Check::Touching => "touching",
            Check::WithinEnvelope => "within-envelope",
            Check::Refuted => "refuted",
        };
        write!(f, "{s}")
    }
}

fn sqrt_dir(d: &Dyadic, prec: u32, dir: Round) -> Dyadic {
    if d.is_zero() {
        return Dyadic::zero();
    }
    debug_assert!(d.m.is_positive());
    // Scale so the scaled mantissa has >= 2*prec+6 bits and an even exponent.
    let mut extra = (2 * prec as i64 + 6 - d.bits() as i64).max(0);
    if (d.e - extra) % 2 != 0 {
        extra += 1;
    }
    let v = d.m.magnitude() << extra as u64;
    let root = v.sqrt();
    let e_half = (d.e - extra) / 2;
    match dir {
        Round::Down => Dyadic {
            m: BigInt::from(root),
            e: e_half,
        }
        .round(prec, dir),
        Round::Up => {
            let exact = &root * &root == v;
            let m = if exact { root } else { root + 1u32 };
            Dyadic {
                m: BigInt::from(m),
                e: e_half,
            }
            .round(prec, dir)
        }
    }
}

/// Directed natural logarithm of a positive dyadic.
///
/// Reduction: `d = f * 2^k` with `f` in `[1, 2)`, then
/// `ln d = 2 atanh((f-1)/(f+1)) + k ln 2` via the atanh series in integer
/// fixed point with an analytic tail bound.
fn ln_dir(d: &Dyadic, prec: u32, dir: Round) -> Dyadic {
    debug_assert!(d.m.is_positive());
    let work = prec + 64;
    let bits = d.bits() as i64;
    let k = d.e + bits - 1; // d = (m / 2^(bits-1)) * 2^k
    let p = d.m.magnitude() - (BigUint::one() << (bits - 1) as u64);
    let q = d.m.magnitude() + (BigUint::one() << (bits - 1) as u64);
    let (f_lo, f_hi) = atanh2_fixed(&p, &q, work);
    let (l2_lo, l2_hi) = ln2_fixed(work);
    let (mut lo, mut hi) = (f_lo, f_hi);
    if k >= 0 {
        lo += &l2_lo * k;
        hi += &l2_hi * k;
    } else {
        lo += &l2_hi * k;
        hi += &l2_lo * k;
    }
    let m = match dir {
        Round::Down => lo,
        Round::Up => hi,
    };
    Dyadic {
        m,
        e: -(work as i64),
    }
    .round(prec, dir)
}

/// `[lo, hi]` fixed-point (scale `2^work`) bounds for `2 atanh(p/q)`,
/// `0 <= p/q <= 1/3`.
fn atanh2_fixed(p: &BigUint, q: &BigUint, work: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << work as u64;
    let p = BigInt::from(p.clone());
    let q = BigInt::from(q.clone());
    if p.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let t_lo = div_dir(&(&p << work as u64), &q, Round::Down);
    let t_up = div_dir(&(&p << work as u64), &q, Round::Up);
    let t2_lo = div_dir(&(&t_lo * &t_lo), &one, Round::Down);
    let t2_up = div_dir(&(&t_up * &t_up), &one, Round::Up);
    // Terms: t^(2j+1) / (2j+1), j = 0..K-1; need (2K+1) log2(3) >= work.
    let terms = (work as u64 * 1000 / 3169 + 2) as usize;
    let mut sum_lo = BigInt::zero();
    let mut sum_up = BigInt::zero();
    let mut pow_lo = t_lo.clone();
    let mut pow_up = t_up.clone();
    for j in 0..terms {
        let den = BigInt::from(2 * j as u64 + 1);
        sum_lo += div_dir(&pow_lo, &den, Round::Down);
        sum_up += div_dir(&pow_up, &den, Round::Up);
        pow_lo = div_dir(&(&pow_lo * &t2_lo), &one, Round::Down);
        pow_up = div_dir(&(&pow_up * &t2_up), &one, Round::Up) + 1u32;
    }
    // Tail: sum_{j>=K} t^(2j+1)/(2j+1) <= t^(2K+1) / ((2K+1)(1-t^2)); with
    // t <= 1/3 the factor 1/(1-t^2) <= 9/8.
    let tail = (&pow_up * 9u32) / 8u32 + 2u32;
    // Slack for the directed rounding drift across the loop.
    let slack = BigInt::from(4 * terms as u64 + 8);
    ((sum_lo - &slack) << 1u32, (sum_up + tail + &slack) << 1u32)
}

fn ln2_fixed(work: u32) -> (BigInt, BigInt) {
    // ln 2 = 2 atanh(1/3).
    atanh2_fixed(&BigUint::one(), &BigUint::from(3u32), work)
}
