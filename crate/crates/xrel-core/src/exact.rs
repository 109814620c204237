//! Exact scalars: rationals and elements of a single quadratic extension.
//!
//! A [`QuadNum`] is `p + q*sqrt(d)` with `p, q` arbitrary-precision rationals
//! and `d` a squarefree integer. `d = 1` marks a plain rational (then `q = 0`
//! after normalization). Values from different extensions never mix except
//! through rationals, which coerce freely into any extension.
//!
//! [`MultiQuad`] is the companion additive accumulator over several radicands
//! at once. It supports exact zero tests of expressions such as
//! `c1*u + c2*v` where the factors come from different quadratic fields,
//! which is all the cross-field reasoning this crate ever needs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Shorthand used across the crate.
pub type Rat = BigRational;

pub fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Splits `n` as `s^2 * f` with `f` squarefree, returning `(s, f)`.
/// `squarefree_part(0) = (1, 0)`; signs stay on `f`.
pub fn squarefree_part(n: i64) -> (i64, i64) {
    if n == 0 {
        return (1, 0);
    }
    let mut f = n;
    let mut s = 1i64;
    let mut p = 2i64;
    let mut m = f.abs();
    while p * p <= m {
        while m % (p * p) == 0 {
            m /= p * p;
            f /= p * p;
            s *= p;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    (s, f)
}

/// Exact element `p + q*sqrt(d)` of Q or Q(sqrt(d)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadNum {
    p: Rat,
    q: Rat,
    d: i64,
}

impl QuadNum {
    /// Builds `p + q*sqrt(d)`, normalizing:
    /// square factors are pulled out of `d`, `sqrt(1)` folds into the
    /// rational part, and `q = 0` forces `d = 1`.
    pub fn new(p: Rat, q: Rat, d: i64) -> Self {
        if q.is_zero() || d == 0 {
            return QuadNum {
                p,
                q: Rat::zero(),
                d: 1,
            };
        }
        let (s, f) = squarefree_part(d);
        let q = q * rat_i64(s);
        if f == 1 {
            QuadNum {
                p: p + q,
                q: Rat::zero(),
                d: 1,
            }
        } else {
            QuadNum { p, q, d: f }
        }
    }

    pub fn from_rat(p: Rat) -> Self {
        QuadNum {
            p,
            q: Rat::zero(),
            d: 1,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_i64(n))
    }

    /// `n/m` as a rational scalar.
    pub fn from_frac(n: i64, m: i64) -> Self {
        Self::from_rat(rat(n, m))
    }

    /// `sqrt(d)` itself (normalized).
    pub fn sqrt_d(d: i64) -> Self {
        Self::new(Rat::zero(), Rat::one(), d)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rational_part(&self) -> &Rat {
        &self.p
    }

    pub fn radical_part(&self) -> &Rat {
        &self.q
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.p.is_one() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// The rational value, if this element lies in Q.
    pub fn as_rational(&self) -> Option<&Rat> {
        if self.q.is_zero() {
            Some(&self.p)
        } else {
            None
        }
    }

    /// The integer value, if this element lies in Z.
    pub fn as_integer(&self) -> Option<BigInt> {
        let r = self.as_rational()?;
        if r.denom().is_one() {
            Some(r.numer().clone())
        } else {
            None
        }
    }

    /// Unifies the discriminants of two operands. Rationals adapt to the
    /// other side; genuinely distinct extensions do not mix.
    fn unify(&self, rhs: &Self) -> Result<i64> {
        if self.d == rhs.d {
            Ok(self.d)
        } else if self.q.is_zero() {
            Ok(rhs.d)
        } else if rhs.q.is_zero() {
            Ok(self.d)
        } else {
            Err(Error::IncompatibleFields(self.d, rhs.d))
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        let d = self.unify(rhs)?;
        Ok(QuadNum::new(&self.p + &rhs.p, &self.q + &rhs.q, d))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        let d = self.unify(rhs)?;
        Ok(QuadNum::new(&self.p - &rhs.p, &self.q - &rhs.q, d))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        let d = self.unify(rhs)?;
        let p = &self.p * &rhs.p + &self.q * &rhs.q * rat_i64(d);
        let q = &self.p * &rhs.q + &self.q * &rhs.p;
        Ok(QuadNum::new(p, q, d))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.unify(rhs)?;
        // 1/(p+q√d) = (p−q√d)/(p²−dq²)
        let n = &rhs.p * &rhs.p - &rhs.q * &rhs.q * rat_i64(d);
        debug_assert!(!n.is_zero(), "nonzero element with zero norm");
        let inv = QuadNum::new(&rhs.p / &n, -(&rhs.q / &n), d);
        self.try_mul(&inv)
    }

    /// Field norm `p^2 - d q^2` (a rational).
    pub fn norm(&self) -> Rat {
        &self.p * &self.p - &self.q * &self.q * rat_i64(self.d)
    }

    /// Galois conjugate `p - q*sqrt(d)`.
    pub fn conj(&self) -> Self {
        QuadNum::new(self.p.clone(), -self.q.clone(), self.d)
    }

    /// Value equality across extensions: a rational equals a rational;
    /// irrational values in distinct squarefree extensions are never equal.
    pub fn eq_value(&self, rhs: &Self) -> bool {
        if self.d == rhs.d {
            return self.p == rhs.p && self.q == rhs.q;
        }
        self.q.is_zero() && rhs.q.is_zero() && self.p == rhs.p
    }

    /// Exact square root inside the same field, if one exists.
    /// Returns the canonical branch; the other root is its negation.
    pub fn sqrt_in_field(&self) -> Option<QuadNum> {
        if self.is_zero() {
            return Some(QuadNum::zero());
        }
        let d = self.d;
        if self.q.is_zero() {
            // rational radicand: try sqrt in Q, then q*sqrt(d) with d*t^2 = p
            if let Some(s) = rat_sqrt(&self.p) {
                return Some(QuadNum::from_rat(s));
            }
            if d != 1 {
                let t2 = &self.p / rat_i64(d);
                if let Some(t) = rat_sqrt(&t2) {
                    return Some(QuadNum::new(Rat::zero(), t, d));
                }
            }
            return None;
        }
        // (s + t√d)^2 = (s²+t²d) + 2st√d ⇒ s² = (p ± m)/2 with m = √(p²−dq²)
        let m = rat_sqrt(&self.norm())?;
        for sign in [1i64, -1] {
            let s2 = (&self.p + &m * rat_i64(sign)) / rat_i64(2);
            if s2.is_negative() {
                continue;
            }
            if let Some(s) = rat_sqrt(&s2) {
                if s.is_zero() {
                    continue;
                }
                let t = &self.q / (&s * rat_i64(2));
                let cand = QuadNum::new(s, t, d);
                if cand.try_mul(&cand).map(|sq| sq.eq_value(self)) == Ok(true) {
                    return Some(cand);
                }
            }
        }
        None
    }

    /// Floating complex embedding with `sqrt(-k) = i*sqrt(k)` on the
    /// principal branch. `precision` is validated (>= 53); evaluation is in
    /// IEEE doubles, so the effective precision saturates at 53 bits.
    pub fn embed_complex(&self, precision: u32) -> Result<Complex64> {
        if precision < 53 {
            return Err(Error::PrecisionTooLow(precision));
        }
        Ok(self.embed())
    }

    /// Infallible embedding at double precision.
    pub fn embed(&self) -> Complex64 {
        let p = rat_to_f64(&self.p);
        if self.q.is_zero() {
            return Complex64::new(p, 0.0);
        }
        let q = rat_to_f64(&self.q);
        let root = (self.d.unsigned_abs() as f64).sqrt();
        if self.d < 0 {
            Complex64::new(p, q * root)
        } else {
            Complex64::new(p + q * root, 0.0)
        }
    }
}

/// Square root of `x` inside the ambient extension Q(sqrt(d)).
///
/// Rational values normalize to `d = 1`, so a plain [`QuadNum::sqrt_in_field`]
/// would miss roots like `sqrt(24) = 2*sqrt(6)` when the caller works in
/// Q(sqrt 6); this entry point restores the ambient context.
pub fn sqrt_in_extension(x: &QuadNum, d: i64) -> Option<QuadNum> {
    if let Some(r) = x.sqrt_in_field() {
        return Some(r);
    }
    if x.is_rational() && d != 1 {
        let t2 = x.rational_part() / rat_i64(d);
        if let Some(t) = rat_sqrt(&t2) {
            return Some(QuadNum::new(Rat::zero(), t, d));
        }
    }
    None
}

/// Spec-facing arithmetic entry point with explicit operation selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn quad_arith(x: &QuadNum, y: &QuadNum, op: ArithOp) -> Result<QuadNum> {
    match op {
        ArithOp::Add => x.try_add(y),
        ArithOp::Sub => x.try_sub(y),
        ArithOp::Mul => x.try_mul(y),
        ArithOp::Div => x.try_div(y),
    }
}

/// Robust rational-to-double conversion (scales down huge numerators).
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let nbits = r.numer().bits() as i64;
    let dbits = r.denom().bits() as i64;
    let shift = (nbits.max(dbits) - 900).max(0) as u64;
    let n = r.numer() >> shift;
    let d = r.denom() >> shift;
    let nf = n.to_f64().unwrap_or(f64::NAN);
    let df = d.to_f64().unwrap_or(f64::NAN);
    nf / df
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    let n = int_sqrt_exact(r.numer())?;
    let d = int_sqrt_exact(r.denom())?;
    Some(Rat::new(n, d))
}

fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

// Operator impls panic on incompatible extensions; that is a programming
// error on internal paths, which unify discriminants up front. Fallible
// callers use the try_* methods.
macro_rules! binop {
    ($trait:ident, $m:ident, $try:ident) => {
        impl $trait for &QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &QuadNum) -> QuadNum {
                self.$try(rhs).expect("incompatible quadratic extensions")
            }
        }
        impl $trait for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                (&self).$m(&rhs)
            }
        }
        impl $trait<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &QuadNum) -> QuadNum {
                (&self).$m(rhs)
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::new(-self.p.clone(), -self.q.clone(), self.d)
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural order (d, p, q); canonical, not numeric.
impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d
            .cmp(&other.d)
            .then_with(|| self.p.cmp(&other.p))
            .then_with(|| self.q.cmp(&other.q))
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadNum {
    /// Canonical text form: `p`, `q*sqrt(d)`, or `p + q*sqrt(d)`
    /// (with `-` absorbed into the radical coefficient when negative).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", fmt_rat(&self.p));
        }
        let radical = format!("{}*sqrt({})", fmt_rat(&self.q.abs()), self.d);
        if self.p.is_zero() {
            if self.q.is_negative() {
                write!(f, "-{radical}")
            } else {
                write!(f, "{radical}")
            }
        } else if self.q.is_negative() {
            write!(f, "{} - {radical}", fmt_rat(&self.p))
        } else {
            write!(f, "{} + {radical}", fmt_rat(&self.p))
        }
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat::new(n, d))
    } else {
        let n = BigInt::from_str(s).map_err(|_| bad())?;
        Ok(Rat::from_integer(n))
    }
}

// One additive term of the text form: either a rational or
// `[coef*]sqrt(d)`.
fn parse_term(term: &str, neg: bool) -> Result<(Rat, Option<(Rat, i64)>)> {
    let term = term.trim();
    let bad = || Error::Parse(term.to_string());
    let sgn = if neg { -Rat::one() } else { Rat::one() };
    if let Some(idx) = term.find("sqrt") {
        let coef = term[..idx].trim().trim_end_matches('*').trim();
        let coef = if coef.is_empty() {
            Rat::one()
        } else {
            parse_rat(coef)?
        };
        let rest = term[idx + 4..].trim();
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let d: i64 = inner.trim().parse().map_err(|_| bad())?;
        Ok((Rat::zero(), Some((sgn * coef, d))))
    } else {
        Ok((sgn * parse_rat(term)?, None))
    }
}

impl FromStr for QuadNum {
    type Err = Error;

    /// Parses `p`, `q*sqrt(d)`, `p + q*sqrt(d)`, `p - q*sqrt(d)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse(String::new()));
        }
        // Split on a top-level '+'/'-' that is not a leading sign and not
        // part of an exponent-free rational (no scientific notation here).
        let bytes = s.as_bytes();
        let mut split = None;
        for (i, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-') && bytes[i - 1] != b'(' && bytes[i - 1] != b'*' {
                // Don't split inside "sqrt(-d)".
                let before = &s[..i];
                if before.matches('(').count() == before.matches(')').count() {
                    split = Some(i);
                    break;
                }
            }
        }
        let mut p_total = Rat::zero();
        let mut radical: Option<(Rat, i64)> = None;
        let mut push = |(r, rad): (Rat, Option<(Rat, i64)>)| -> Result<()> {
            p_total += r;
            if let Some((c, d)) = rad {
                if let Some((c0, d0)) = &mut radical {
                    if *d0 != d {
                        return Err(Error::IncompatibleFields(*d0, d));
                    }
                    *c0 += c;
                } else {
                    radical = Some((c, d));
                }
            }
            Ok(())
        };
        match split {
            Some(i) => {
                push(parse_term(&s[..i], false)?)?;
                push(parse_term(&s[i + 1..], bytes[i] == b'-')?)?;
            }
            None => push(parse_term(s, false)?)?,
        }
        Ok(match radical {
            Some((q, d)) => QuadNum::new(p_total, q, d),
            None => QuadNum::from_rat(p_total),
        })
    }
}

impl serde::Serialize for QuadNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for QuadNum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact element of the multi-quadratic ring Q[sqrt(e1), sqrt(e2), ...],
/// stored as rational coefficients keyed by squarefree radicand (1 is the
/// rational component). Coefficients of distinct squarefree radicands are
/// linearly independent over Q, so `is_zero` is an exact test.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiQuad {
    terms: BTreeMap<i64, Rat>,
}

impl MultiQuad {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_quad(x: &QuadNum) -> Self {
        let mut m = Self::zero();
        m.push(1, x.rational_part().clone());
        m.push(x.discriminant(), x.radical_part().clone());
        m
    }

    fn push(&mut self, e: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        for (e, c) in &rhs.terms {
            self.push(*e, c.clone());
        }
    }

    pub fn sub_assign(&mut self, rhs: &Self) {
        for (e, c) in &rhs.terms {
            self.push(*e, -c.clone());
        }
    }

    /// Product of two radicals under the principal embedding:
    /// `sqrt(e1)*sqrt(e2) = s*g*sqrt(f)` where `|e1 e2| = g^2 |f|`, the sign
    /// `s` is −1 when both radicands are negative, and `f` carries a negative
    /// sign when exactly one of them is.
    fn radical_product(e1: i64, e2: i64) -> (Rat, i64) {
        if e1 == 1 {
            return (Rat::one(), e2);
        }
        if e2 == 1 {
            return (Rat::one(), e1);
        }
        let (g, f_abs) = squarefree_part(e1.abs() * e2.abs());
        let neg_count = (e1 < 0) as u32 + (e2 < 0) as u32;
        let sign = if neg_count == 2 { -1 } else { 1 };
        let radicand = if neg_count == 1 { -f_abs } else { f_abs };
        (rat_i64(sign * g), radicand)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let (scale, e) = Self::radical_product(*e1, *e2);
                out.push(e, c1 * c2 * &scale);
            }
        }
        out
    }

    /// Accumulates `a*b` exactly, even when `a` and `b` live in different
    /// quadratic extensions.
    pub fn add_product(&mut self, a: &QuadNum, b: &QuadNum) {
        let prod = Self::from_quad(a).mul(&Self::from_quad(b));
        self.add_assign(&prod);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Collapses back to a single-extension value when possible.
    pub fn as_quad(&self) -> Option<QuadNum> {
        let mut p = Rat::zero();
        let mut rad: Option<(Rat, i64)> = None;
        for (e, c) in &self.terms {
            if *e == 1 {
                p = c.clone();
            } else if rad.is_none() {
                rad = Some((c.clone(), *e));
            } else {
                return None;
            }
        }
        Some(match rad {
            Some((q, d)) => QuadNum::new(p, q, d),
            None => QuadNum::from_rat(p),
        })
    }

    pub fn embed(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let root = (e.unsigned_abs() as f64).sqrt();
            let base = if *e < 0 {
                Complex64::new(0.0, root)
            } else {
                Complex64::new(root, 0.0)
            };
            z += base * rat_to_f64(c);
        }
        z
    }
}
