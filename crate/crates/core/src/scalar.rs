//! Exact field arithmetic over the rationals and quadratic extensions ℚ(√d).
//!
//! A [`Scalar`] is either a rational number or an element `a + b√d` of a
//! quadratic field. Values are kept in canonical form: an element whose
//! irrational part vanishes is always stored as [`Scalar::Rational`], so
//! equal values compare and hash identically.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("square root of a negative value")]
    NegativeInput,
    #[error("value is not real")]
    NotReal,
    #[error("{0} is not a squarefree integer other than 0 and 1")]
    BadDiscriminant(i64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// The field a scalar (or a matrix of scalars) lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Quadratic(i64),
}

impl Field {
    /// Smallest field containing both; rationals promote into any ℚ(√d).
    pub fn join(self, other: Field) -> Result<Field, ScalarError> {
        match (self, other) {
            (Field::Rational, f) | (f, Field::Rational) => Ok(f),
            (Field::Quadratic(a), Field::Quadratic(b)) if a == b => Ok(self),
            _ => Err(ScalarError::FieldMismatch(self, other)),
        }
    }

    pub fn is_real(self) -> bool {
        match self {
            Field::Rational => true,
            Field::Quadratic(d) => d > 0,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Quadratic(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

/// `a + b√d` with `b ≠ 0`. Construct through [`Scalar::quadratic`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: i64,
}

impl QuadExt {
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Quadratic(QuadExt),
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Exact rational square root, if there is one.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = int_sqrt_exact(x.numer())?;
    let d = int_sqrt_exact(x.denom())?;
    Some(Rational::new(n, d))
}

fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Splits a nonzero integer as `k² · s` with `s` squarefree (sign kept in `s`).
///
/// Trial division runs up to 10⁶; a cofactor beyond that which is not a
/// perfect square is assumed squarefree.
pub fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "squarefree_split of zero");
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = n.abs();
    let mut k = BigInt::one();
    let mut s = BigInt::one();
    let mut p = 2u64;
    while p <= 1_000_000 {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            k *= pb.pow(e / 2);
            if e % 2 == 1 {
                s *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(r) = int_sqrt_exact(&rest) {
        k *= r;
    } else {
        s *= rest;
    }
    (k, s * sign)
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(rat(n))
    }

    /// `n/d`; panics when `d == 0`.
    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::Rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::Rational(r)
    }

    /// `a + b√d`, canonicalised.
    pub fn quadratic(a: Rational, b: Rational, d: i64) -> Result<Self, ScalarError> {
        if d == 1 || !is_squarefree(d) {
            return Err(ScalarError::BadDiscriminant(d));
        }
        Ok(Self::quad_unchecked(a, b, d))
    }

    fn quad_unchecked(a: Rational, b: Rational, d: i64) -> Self {
        if b.is_zero() {
            Scalar::Rational(a)
        } else {
            Scalar::Quadratic(QuadExt { a, b, d })
        }
    }

    /// The imaginary unit √−1.
    pub fn i() -> Self {
        Self::quad_unchecked(Rational::zero(), Rational::one(), -1)
    }

    /// √n for an integer `n`, written as `k√s` with `s` squarefree.
    pub fn sqrt_int(n: i64) -> Self {
        if n == 0 {
            return Scalar::zero();
        }
        let (k, s) = squarefree_split(&BigInt::from(n));
        let s = s.to_i64().expect("squarefree part of an i64 fits in i64");
        if s == 1 {
            Scalar::Rational(Rational::from_integer(k))
        } else {
            Self::quad_unchecked(Rational::zero(), Rational::from_integer(k), s)
        }
    }

    /// √r for any rational `r`, written as `(k/m)√s` with `s` squarefree;
    /// negative `r` lands in an imaginary field.
    pub fn sqrt_rational(r: &Rational) -> Option<Self> {
        if r.is_zero() {
            return Some(Scalar::zero());
        }
        if let Some(q) = rational_sqrt(r) {
            return Some(Scalar::Rational(q));
        }
        // n/m = n·m / m²
        let (k, s) = squarefree_split(&(r.numer() * r.denom()));
        let s = s.to_i64()?;
        Some(Self::quad_unchecked(Rational::zero(), Rational::new(k, r.denom().clone()), s))
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Quadratic(q) => Field::Quadratic(q.d),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Quadratic(_) => None,
        }
    }

    /// Rational and irrational parts `(a, b)` of `a + b√d`.
    pub fn parts(&self) -> (Rational, Rational) {
        match self {
            Scalar::Rational(r) => (r.clone(), Rational::zero()),
            Scalar::Quadratic(q) => (q.a.clone(), q.b.clone()),
        }
    }

    pub fn is_real(&self) -> bool {
        self.field().is_real()
    }

    fn common(&self, other: &Scalar) -> Result<Option<i64>, ScalarError> {
        match self.field().join(other.field())? {
            Field::Rational => Ok(None),
            Field::Quadratic(d) => Ok(Some(d)),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Ok(Scalar::Rational(x + y)),
            _ => {
                let d = self.common(other)?.expect("quadratic operand");
                let (a, b) = self.parts();
                let (c, e) = other.parts();
                Ok(Self::quad_unchecked(a + c, b + e, d))
            }
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Ok(Scalar::Rational(x * y)),
            (Scalar::Rational(x), Scalar::Quadratic(q)) | (Scalar::Quadratic(q), Scalar::Rational(x)) => {
                Ok(Self::quad_unchecked(x * &q.a, x * &q.b, q.d))
            }
            (Scalar::Quadratic(p), Scalar::Quadratic(q)) => {
                if p.d != q.d {
                    return Err(ScalarError::FieldMismatch(self.field(), other.field()));
                }
                let dd = rat(p.d);
                let a = &p.a * &q.a + &p.b * &q.b * dd;
                let b = &p.a * &q.b + &p.b * &q.a;
                Ok(Self::quad_unchecked(a, b, p.d))
            }
        }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let inv = other.inv()?;
        self.try_mul(&inv)
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(r.recip()))
                }
            }
            Scalar::Quadratic(q) => {
                let n = self.norm();
                Ok(Self::quad_unchecked(&q.a / &n, -(&q.b / &n), q.d))
            }
        }
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        match self {
            Scalar::Rational(r) => r * r,
            Scalar::Quadratic(q) => &q.a * &q.a - &q.b * &q.b * rat(q.d),
        }
    }

    /// Galois conjugate `a − b√d`.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Rational(_) => self.clone(),
            Scalar::Quadratic(q) => Self::quad_unchecked(q.a.clone(), -q.b.clone(), q.d),
        }
    }

    /// Complex conjugate; equals the Galois conjugate when `d < 0` and is the
    /// identity on real fields.
    pub fn complex_conj(&self) -> Scalar {
        match self {
            Scalar::Quadratic(q) if q.d < 0 => self.conj(),
            _ => self.clone(),
        }
    }

    /// `|x|²` for a complex value, `x²` for a real one.
    pub fn abs_squared(&self) -> Scalar {
        match self {
            Scalar::Quadratic(q) if q.d < 0 => Scalar::Rational(self.norm()),
            _ => self * self,
        }
    }

    /// Sign of a real value.
    pub fn signum(&self) -> Result<Ordering, ScalarError> {
        match self {
            Scalar::Rational(r) => Ok(r.cmp(&Rational::zero())),
            Scalar::Quadratic(q) => {
                if q.d < 0 {
                    return Err(ScalarError::NotReal);
                }
                let sa = q.a.cmp(&Rational::zero());
                let sb = q.b.cmp(&Rational::zero());
                if sa == Ordering::Equal || sa == sb {
                    return Ok(sb);
                }
                // opposite signs: compare a² with d·b²
                let a2 = &q.a * &q.a;
                let db2 = &q.b * &q.b * rat(q.d);
                match a2.cmp(&db2) {
                    Ordering::Greater => Ok(sa),
                    Ordering::Less => Ok(sb),
                    Ordering::Equal => unreachable!("d is not a perfect square"),
                }
            }
        }
    }

    pub fn cmp_real(&self, other: &Scalar) -> Result<Ordering, ScalarError> {
        self.try_sub(other)?.signum()
    }

    pub fn abs(&self) -> Result<Scalar, ScalarError> {
        Ok(if self.signum()? == Ordering::Less { -self } else { self.clone() })
    }

    /// Exact nonnegative square root inside the value's own field.
    ///
    /// Returns `Ok(None)` when the root is not representable there.
    pub fn sqrt_in_field(&self) -> Result<Option<Scalar>, ScalarError> {
        if self.signum()? == Ordering::Less {
            return Err(ScalarError::NegativeInput);
        }
        match self {
            Scalar::Rational(r) => Ok(rational_sqrt(r).map(Scalar::Rational)),
            Scalar::Quadratic(q) => {
                // (x + y√d)² = a + b√d  ⇔  x² + d·y² = a, 2xy = b
                let Some(s) = rational_sqrt(&self.norm()) else {
                    return Ok(None);
                };
                let two = rat(2);
                for x2 in [(&q.a + &s) / &two, (&q.a - &s) / &two] {
                    let Some(x) = rational_sqrt(&x2) else { continue };
                    if x.is_zero() {
                        continue;
                    }
                    let y = &q.b / (&two * &x);
                    let cand = Self::quad_unchecked(x, y, q.d);
                    if &(&cand * &cand) == self {
                        return Ok(Some(cand.abs()?));
                    }
                }
                Ok(None)
            }
        }
    }

    /// Like [`Scalar::sqrt_in_field`], but a rational input may also take a
    /// root of the form `y√d` in the real field ℚ(√d).
    pub fn sqrt_in_extension(&self, d: i64) -> Result<Option<Scalar>, ScalarError> {
        if let Some(r) = self.sqrt_in_field()? {
            return Ok(Some(r));
        }
        match self {
            Scalar::Rational(r) if d > 1 && is_squarefree(d) => {
                Ok(rational_sqrt(&(r / rat(d))).map(|y| Self::quad_unchecked(Rational::zero(), y, d)))
            }
            _ => Ok(None),
        }
    }

    /// Nearest double for a real value (relative error within a few ulps).
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Scalar::Rational(r) => Some(rational_to_f64(r)),
            Scalar::Quadratic(q) if q.d > 0 => {
                let rd = (q.d as f64).sqrt();
                if q.a.is_zero() || q.a.is_positive() == q.b.is_positive() {
                    Some(rational_to_f64(&q.a) + rational_to_f64(&q.b) * rd)
                } else {
                    // a + b√d = (a² − d·b²) / (a − b√d) avoids cancellation
                    let n = rational_to_f64(&self.norm());
                    Some(n / (rational_to_f64(&q.a) - rational_to_f64(&q.b) * rd))
                }
            }
            Scalar::Quadratic(_) => None,
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        match self {
            Scalar::Quadratic(q) if q.d < 0 => {
                let im = rational_to_f64(&q.b) * ((-q.d) as f64).sqrt();
                Complex64::new(rational_to_f64(&q.a), im)
            }
            _ => Complex64::new(self.to_f64().expect("real value"), 0.0),
        }
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

// Operator impls panic on a field mismatch; callers that cannot rule one out
// use the `try_*` methods.
macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quadratic(q) => Scalar::Quadratic(QuadExt { a: -&q.a, b: -&q.b, d: q.d }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => fmt_rational(r, f),
            Scalar::Quadratic(q) => {
                fmt_rational(&q.a, f)?;
                if q.b.is_negative() {
                    write!(f, "-")?;
                    fmt_rational(&-&q.b, f)?;
                } else {
                    write!(f, "+")?;
                    fmt_rational(&q.b, f)?;
                }
                write!(f, "*sqrt({})", q.d)
            }
        }
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (neg, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|c| c.is_ascii_digit());
    let (n, d) = match body.split_once('/') {
        Some((n, d)) if digits(n) && digits(d) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None if digits(body) => (body.parse::<BigInt>().ok()?, BigInt::one()),
        _ => return None,
    };
    if d.is_zero() {
        return None;
    }
    let r = Rational::new(n, d);
    Some(if neg { -r } else { r })
}

impl FromStr for Scalar {
    type Err = ScalarError;

    /// Accepts `a`, `a/b` and `a/b+c/e*sqrt(D)` (either sign between terms),
    /// plus the shorthands `sqrt(D)`, `-sqrt(D)`, `c/e*sqrt(D)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScalarError::Parse(s.to_string());
        let Some(pos) = s.find("sqrt(") else {
            return parse_rational(s).map(Scalar::Rational).ok_or_else(err);
        };
        let inner = s[pos + 5..].strip_suffix(')').ok_or_else(err)?;
        let d: i64 = inner.parse().map_err(|_| err())?;
        let head = &s[..pos];
        let head = head.strip_suffix('*').unwrap_or(head);
        if head.len() < s[..pos].len() && head.ends_with(['+', '-']) {
            return Err(err());
        }
        // split "a±b" at the last sign that is not the leading one
        let split = head
            .char_indices()
            .rev()
            .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i);
        let (a_str, b_str) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("", head),
        };
        let a = if a_str.is_empty() { Rational::zero() } else { parse_rational(a_str).ok_or_else(err)? };
        let b = match b_str {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            t => parse_rational(t).ok_or_else(err)?,
        };
        Scalar::quadratic(a, b, d)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}


#[cfg(test)]
mod proptests {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};

    use proptest::prelude::*;

    use super::*;

    fn rational() -> impl Strategy<Value = Rational> {
        (-60i64..=60, 1i64..=24).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn element(d: i64) -> impl Strategy<Value = Scalar> {
        (rational(), rational()).prop_map(move |(a, b)| Scalar::quadratic(a, b, d).unwrap())
    }

    fn hash(x: &Scalar) -> u64 {
        let mut h = DefaultHasher::new();
        x.hash(&mut h);
        h.finish()
    }

    proptest! {
        #[test]
        fn inverse(x in element(2), y in element(-1)) {
            for v in [x, y] {
                if !v.is_zero() {
                    prop_assert!((&v * &v.inv().unwrap()).is_one());
                }
            }
        }

        #[test]
        fn canonical_form(a in rational(), b in rational()) {
            let plain = Scalar::from_rational(a.clone());
            let padded = Scalar::quadratic(a.clone(), Rational::zero(), 3).unwrap();
            prop_assert_eq!(&plain, &padded);
            prop_assert_eq!(hash(&plain), hash(&padded));
            // sqrt(12) = 2 sqrt(3)
            let x = Scalar::quadratic(a.clone(), b.clone() * Rational::from_integer(BigInt::from(2)), 3).unwrap();
            let y = Scalar::from_rational(a) + Scalar::from_rational(b) * Scalar::sqrt_int(12);
            prop_assert_eq!(hash(&x), hash(&y));
            prop_assert_eq!(x, y);
        }

        #[test]
        fn sqrt_squares_back(x in element(5), r in rational()) {
            for v in [&x * &x, Scalar::from_rational(r.abs())] {
                if let Some(root) = v.sqrt_in_field().unwrap() {
                    prop_assert_eq!(&root * &root, v);
                }
            }
        }

        #[test]
        fn conjugation_is_an_automorphism(x in element(7), y in element(7)) {
            prop_assert_eq!((&x + &y).conj(), x.conj() + y.conj());
            prop_assert_eq!((&x * &y).conj(), x.conj() * y.conj());
            prop_assert_eq!(x.conj().conj(), x.clone());
            if !y.is_zero() {
                prop_assert_eq!((&x / &y).conj(), x.conj() / y.conj());
            }
        }
    }
}
