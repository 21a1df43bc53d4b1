//! Points of the extended line.
//!
//! [`ExtPoint`] is what breakpoints and evaluation work with: a rational or
//! one of the two ends. [`Point`] additionally carries quadratic irrationals,
//! which show up as isolated fixed points of projective pieces and therefore
//! as ends of support components.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::rational::{fmt_rational, parse_rational, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtPoint {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtPoint {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtPoint::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtPoint::Finite(_))
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "inf" | "+inf" => Some(ExtPoint::PosInf),
            "-inf" => Some(ExtPoint::NegInf),
            _ => parse_rational(s).map(ExtPoint::Finite),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtPoint::NegInf => f64::NEG_INFINITY,
            ExtPoint::PosInf => f64::INFINITY,
            ExtPoint::Finite(r) => to_f64(r),
        }
    }
}

impl From<Rational> for ExtPoint {
    fn from(r: Rational) -> Self {
        ExtPoint::Finite(r)
    }
}

impl fmt::Display for ExtPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtPoint::NegInf => f.write_str("-inf"),
            ExtPoint::PosInf => f.write_str("inf"),
            ExtPoint::Finite(r) => f.write_str(&fmt_rational(r)),
        }
    }
}

impl Serialize for ExtPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `(num + coeff * sqrt(radicand)) / den` with `den > 0`, `coeff != 0` and a
/// radicand that is not a perfect square.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticIrrational {
    num: BigInt,
    coeff: BigInt,
    radicand: BigInt,
    den: BigInt,
}

impl QuadraticIrrational {
    /// Returns `None` when the value is rational (perfect-square radicand or
    /// zero coefficient).
    pub fn new(num: BigInt, coeff: BigInt, radicand: BigInt, den: BigInt) -> Option<Self> {
        assert!(!den.is_zero(), "zero denominator");
        if coeff.is_zero() || radicand.is_negative() || is_square(&radicand) {
            return None;
        }
        let (num, coeff, den) = if den.is_negative() {
            (-num, -coeff, -den)
        } else {
            (num, coeff, den)
        };
        Some(QuadraticIrrational {
            num,
            coeff,
            radicand,
            den,
        })
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    /// Rationals strictly below and above, at most `2^-bits * |coeff| / den` apart.
    pub fn bounds(&self, bits: u32) -> (Rational, Rational) {
        let scale = BigInt::one() << bits;
        let s = (&self.radicand * &scale * &scale).sqrt();
        let lo_root = Rational::new(s.clone(), scale.clone());
        let hi_root = Rational::new(s + 1, scale);
        let at = |root: &Rational| {
            (Rational::from_integer(self.num.clone())
                + Rational::from_integer(self.coeff.clone()) * root)
                / Rational::from_integer(self.den.clone())
        };
        let (a, b) = (at(&lo_root), at(&hi_root));
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bounds(64);
        (to_f64(&lo) + to_f64(&hi)) / 2.0
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        // (num + coeff√D)/den - p/q has the sign of q*num - p*den + q*coeff√D
        let a = r.denom() * &self.num - r.numer() * &self.den;
        let b = r.denom() * &self.coeff;
        sign_with_root(&a, &b, &self.radicand)
    }

    pub fn cmp_quadratic(&self, other: &Self) -> Ordering {
        let a = &self.num * &other.den - &other.num * &self.den;
        let b = &self.coeff * &other.den;
        let c = -(&other.coeff * &self.den);
        sign_with_two_roots(&a, &b, &self.radicand, &c, &other.radicand)
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.coeff.is_negative() { '-' } else { '+' };
        let c = self.coeff.abs();
        let root = if c.is_one() {
            format!("sqrt({})", self.radicand)
        } else {
            format!("{}*sqrt({})", c, self.radicand)
        };
        if self.den.is_one() {
            write!(f, "{}{}{}", self.num, sign, root)
        } else {
            write!(f, "({}{}{})/{}", self.num, sign, root, self.den)
        }
    }
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    &(&s * &s) == n
}

fn ordering_of(sign: Sign) -> Ordering {
    match sign {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// Sign of `a + b*sqrt(d)` for a non-square `d >= 0`.
fn sign_with_root(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = ordering_of(a.sign());
    let sb = ordering_of(b.sign());
    if sb == Ordering::Equal || sa == sb {
        return if sa == Ordering::Equal { sb } else { sa };
    }
    if sa == Ordering::Equal {
        return sb;
    }
    // opposite signs: the larger magnitude wins
    match (a * a).cmp(&(b * b * d)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Sign of `a + b*sqrt(d1) + c*sqrt(d2)`.
fn sign_with_two_roots(a: &BigInt, b: &BigInt, d1: &BigInt, c: &BigInt, d2: &BigInt) -> Ordering {
    let s1 = sign_with_root(a, b, d1);
    let s2 = ordering_of(c.sign());
    if s2 == Ordering::Equal {
        return s1;
    }
    if s1 == Ordering::Equal || s1 == s2 {
        return s2;
    }
    // |a + b√d1|^2 - c^2 d2 = (a^2 + b^2 d1 - c^2 d2) + 2ab√d1
    let e = a * a + b * b * d1 - c * c * d2;
    let f = BigInt::from(2) * a * b;
    match sign_with_root(&e, &f, d1) {
        Ordering::Greater => s1,
        Ordering::Less => s2,
        Ordering::Equal => Ordering::Equal,
    }
}

/// A point of the extended line that may be a quadratic irrational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    NegInf,
    Rational(Rational),
    Quadratic(QuadraticIrrational),
    PosInf,
}

impl Point {
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Point::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_ext(&self) -> Option<ExtPoint> {
        match self {
            Point::NegInf => Some(ExtPoint::NegInf),
            Point::PosInf => Some(ExtPoint::PosInf),
            Point::Rational(r) => Some(ExtPoint::Finite(r.clone())),
            Point::Quadratic(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Point::Rational(_) | Point::Quadratic(_))
    }

    /// A rational at or below the point (strictly below for irrationals).
    pub fn rational_below(&self) -> Option<Rational> {
        match self {
            Point::Rational(r) => Some(r.clone()),
            Point::Quadratic(q) => Some(q.bounds(64).0),
            _ => None,
        }
    }

    /// A rational at or above the point (strictly above for irrationals).
    pub fn rational_above(&self) -> Option<Rational> {
        match self {
            Point::Rational(r) => Some(r.clone()),
            Point::Quadratic(q) => Some(q.bounds(64).1),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Point::NegInf => f64::NEG_INFINITY,
            Point::PosInf => f64::INFINITY,
            Point::Rational(r) => to_f64(r),
            Point::Quadratic(q) => q.to_f64(),
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        match self {
            Point::NegInf => Ordering::Less,
            Point::PosInf => Ordering::Greater,
            Point::Rational(s) => s.cmp(r),
            Point::Quadratic(q) => q.cmp_rational(r),
        }
    }

    pub fn cmp_ext(&self, e: &ExtPoint) -> Ordering {
        match e {
            ExtPoint::NegInf => {
                if *self == Point::NegInf {
                    Ordering::Equal
                } else {
                    Ordering::Greater
                }
            }
            ExtPoint::PosInf => {
                if *self == Point::PosInf {
                    Ordering::Equal
                } else {
                    Ordering::Less
                }
            }
            ExtPoint::Finite(r) => self.cmp_rational(r),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Point::NegInf => 0,
            Point::Rational(_) | Point::Quadratic(_) => 1,
            Point::PosInf => 2,
        }
    }
}

impl From<ExtPoint> for Point {
    fn from(e: ExtPoint) -> Self {
        match e {
            ExtPoint::NegInf => Point::NegInf,
            ExtPoint::PosInf => Point::PosInf,
            ExtPoint::Finite(r) => Point::Rational(r),
        }
    }
}

impl From<Rational> for Point {
    fn from(r: Rational) -> Self {
        Point::Rational(r)
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Point::Rational(a), Point::Rational(b)) => a.cmp(b),
            (Point::Quadratic(a), Point::Rational(b)) => a.cmp_rational(b),
            (Point::Rational(a), Point::Quadratic(b)) => b.cmp_rational(a).reverse(),
            (Point::Quadratic(a), Point::Quadratic(b)) => a.cmp_quadratic(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::NegInf => f.write_str("-inf"),
            Point::PosInf => f.write_str("inf"),
            Point::Rational(r) => f.write_str(&fmt_rational(r)),
            Point::Quadratic(q) => q.fmt(f),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
