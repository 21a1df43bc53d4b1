use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::point::{ExtPoint, Point, QuadraticIrrational};
use crate::rational::{common_denominator, Rational};

/// An orientation-preserving map `t ↦ (a t + b) / (c t + d)`.
///
/// The quadruple is kept canonical: `ad - bc > 0`, `gcd(a, b, c, d) = 1`, and
/// the overall sign chosen so that `c > 0`, or `c = 0` and `a > 0`. Two maps
/// are equal as functions iff their quadruples are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FracLinearMap {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// Fixed points of a single fractional-linear map on the whole line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedPoints {
    All,
    Roots(Vec<Point>),
}

impl FracLinearMap {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if !det.is_positive() {
            return Err(Error::Orientation(format!(
                "({a}, {b}, {c}, {d}) has determinant {det}"
            )));
        }
        Ok(Self::normalized(a, b, c, d))
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// Accepts rational coefficients and clears denominators.
    pub fn from_rationals(coeffs: &[Rational; 4]) -> Result<Self> {
        let l = common_denominator(coeffs.iter());
        let [a, b, c, d] = coeffs.clone().map(|q| (q * Rational::from_integer(l.clone())).to_integer());
        Self::new(a, b, c, d)
    }

    pub fn identity() -> Self {
        FracLinearMap {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    /// `t ↦ slope * t + intercept`.
    pub fn affine(slope: &Rational, intercept: &Rational) -> Result<Self> {
        Self::from_rationals(&[
            slope.clone(),
            intercept.clone(),
            Rational::zero(),
            Rational::one(),
        ])
    }

    pub fn translation(by: &Rational) -> Self {
        Self::affine(&Rational::one(), by).expect("translations preserve orientation")
    }

    fn normalized(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        let g = a.gcd(&b).gcd(&c).gcd(&d);
        let (mut a, mut b, mut c, mut d) = if g.is_one() {
            (a, b, c, d)
        } else {
            (a / &g, b / &g, c / &g, d / &g)
        };
        if c.is_negative() || (c.is_zero() && a.is_negative()) {
            a = -a;
            b = -b;
            c = -c;
            d = -d;
        }
        FracLinearMap { a, b, c, d }
    }

    pub fn coefficients(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn determinant(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn is_affine(&self) -> bool {
        self.c.is_zero()
    }

    pub fn is_translation(&self) -> bool {
        self.c.is_zero() && self.a == self.d
    }

    /// Slope of an affine map.
    pub fn slope(&self) -> Option<Rational> {
        self.is_affine()
            .then(|| Rational::new(self.a.clone(), self.d.clone()))
    }

    /// Translation length of a translation.
    pub fn translation_length(&self) -> Option<Rational> {
        self.is_translation()
            .then(|| Rational::new(self.b.clone(), self.d.clone()))
    }

    pub fn pole(&self) -> Option<Rational> {
        (!self.c.is_zero()).then(|| Rational::new(-self.d.clone(), self.c.clone()))
    }

    /// Image of a rational; `None` at the pole.
    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        let (p, q) = (t.numer(), t.denom());
        let den = &self.c * p + &self.d * q;
        if den.is_zero() {
            return None;
        }
        Some(Rational::new(&self.a * p + &self.b * q, den))
    }

    /// Approximate image, for drawing.
    pub fn eval_f64(&self, t: f64) -> f64 {
        use num_traits::ToPrimitive;
        let f = |n: &BigInt| n.to_f64().unwrap_or(f64::NAN);
        (f(&self.a) * t + f(&self.b)) / (f(&self.c) * t + f(&self.d))
    }

    /// Image of an extended point; `None` at the pole, or when a finite
    /// point is sent to infinity.
    pub fn eval_ext(&self, t: &ExtPoint) -> Option<ExtPoint> {
        match t {
            ExtPoint::Finite(r) => self.eval(r).map(ExtPoint::Finite),
            ExtPoint::PosInf | ExtPoint::NegInf => {
                if self.c.is_zero() {
                    // a, d > 0, so the affine map preserves each end
                    Some(t.clone())
                } else {
                    Some(ExtPoint::Finite(Rational::new(self.a.clone(), self.c.clone())))
                }
            }
        }
    }

    /// The map "first `self`, then `next`", i.e. `next ∘ self`.
    pub fn then(&self, next: &Self) -> Self {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&next.a, &next.b, &next.c, &next.d);
        Self::normalized(
            a2 * a1 + b2 * c1,
            a2 * b1 + b2 * d1,
            c2 * a1 + d2 * c1,
            c2 * b1 + d2 * d1,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::normalized(
            self.d.clone(),
            -self.b.clone(),
            -self.c.clone(),
            self.a.clone(),
        )
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.then(other) == other.then(self)
    }

    /// Derivative `det / (c t + d)^2`.
    pub fn derivative(&self, t: &Rational) -> Option<Rational> {
        let den = &self.c * t.numer() + &self.d * t.denom();
        if den.is_zero() {
            return None;
        }
        let q = t.denom();
        Some(Rational::new(self.determinant() * q * q, &den * &den))
    }

    /// Roots of `c t² + (d − a) t − b = 0`, in increasing order.
    pub fn fixed_points(&self) -> FixedPoints {
        if self.is_identity() {
            return FixedPoints::All;
        }
        let lin = &self.d - &self.a;
        if self.c.is_zero() {
            if lin.is_zero() {
                return FixedPoints::Roots(vec![]);
            }
            return FixedPoints::Roots(vec![Point::Rational(Rational::new(self.b.clone(), lin))]);
        }
        let disc = &lin * &lin + BigInt::from(4) * &self.b * &self.c;
        let two_c = BigInt::from(2) * &self.c;
        let centre = &self.a - &self.d;
        if disc.is_negative() {
            return FixedPoints::Roots(vec![]);
        }
        if disc.is_zero() {
            return FixedPoints::Roots(vec![Point::Rational(Rational::new(centre, two_c))]);
        }
        let s = disc.sqrt();
        if &s * &s == disc {
            return FixedPoints::Roots(vec![
                Point::Rational(Rational::new(&centre - &s, two_c.clone())),
                Point::Rational(Rational::new(&centre + &s, two_c)),
            ]);
        }
        let root = |sign: i64| {
            QuadraticIrrational::new(centre.clone(), sign.into(), disc.clone(), two_c.clone())
                .map(Point::Quadratic)
                .expect("non-square discriminant")
        };
        // c > 0, so the minus root is the smaller
        FixedPoints::Roots(vec![root(-1), root(1)])
    }
}

fn linear_text(coef: &BigInt, cons: &BigInt) -> String {
    let mut s = String::new();
    if !coef.is_zero() {
        if coef.is_one() {
            s.push('t');
        } else if *coef == BigInt::from(-1) {
            s.push_str("-t");
        } else {
            s.push_str(&format!("{coef}t"));
        }
    }
    if !cons.is_zero() {
        if s.is_empty() {
            s.push_str(&cons.to_string());
        } else if cons.is_negative() {
            s.push_str(&format!("-{}", cons.abs()));
        } else {
            s.push_str(&format!("+{cons}"));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// `t ↦ (a t + b)/d` written as slope term plus intercept, e.g. `t/2+1/4`.
fn affine_text(a: &BigInt, b: &BigInt, d: &BigInt) -> String {
    let slope = Rational::new(a.clone(), d.clone());
    let mut s = match (slope.numer().is_one(), slope.denom().is_one()) {
        (true, true) => "t".to_string(),
        (false, true) => format!("{}t", slope.numer()),
        (true, false) => format!("t/{}", slope.denom()),
        (false, false) => format!("{}t/{}", slope.numer(), slope.denom()),
    };
    let icpt = Rational::new(b.clone(), d.clone());
    if icpt.is_positive() {
        s.push('+');
    }
    if !icpt.is_zero() {
        s.push_str(&crate::rational::fmt_rational(&icpt));
    }
    s
}

impl fmt::Display for FracLinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_zero() {
            return f.write_str(&affine_text(&self.a, &self.b, &self.d));
        }
        let num = linear_text(&self.a, &self.b);
        let den = linear_text(&self.c, &self.d);
        let wrap = |s: String| {
            if s[1..].contains(['+', '-']) {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(num), wrap(den))
    }
}

impl Serialize for FracLinearMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(a: i64, b: i64, c: i64, d: i64) -> FracLinearMap {
        FracLinearMap::from_ints(a, b, c, d).unwrap()
    }

    #[test]
    fn canonical_sign_and_gcd() {
        assert_eq!(m(-2, 0, 0, -4), m(1, 0, 0, 2));
        assert_eq!(m(-1, 0, -1, -1), m(1, 0, 1, 1));
        assert_eq!(m(3, 6, 0, 3), m(1, 2, 0, 1));
    }

    #[test]
    fn orientation_reversing_rejected() {
        assert!(matches!(
            FracLinearMap::from_ints(-1, 0, 0, 1),
            Err(Error::Orientation(_))
        ));
        assert!(FracLinearMap::from_ints(1, 1, 1, 1).is_err());
    }

    #[test]
    fn composition_is_right_action() {
        let double = m(2, 0, 0, 1);
        let shift = m(1, 1, 0, 1);
        // first double, then shift: t ↦ 2t + 1
        assert_eq!(double.then(&shift), m(2, 1, 0, 1));
        assert_eq!(shift.then(&double), m(2, 2, 0, 1));
        assert_eq!(double.then(&double.inverse()), FracLinearMap::identity());
    }

    #[test]
    fn evaluation() {
        let b1 = m(1, 0, -1, 1); // t / (1 - t)
        assert_eq!(b1.eval(&rat(1, 4)), Some(rat(1, 3)));
        assert_eq!(b1.eval(&int(1)), None);
        assert_eq!(b1.pole(), Some(int(1)));
        assert_eq!(
            b1.eval_ext(&ExtPoint::PosInf),
            Some(ExtPoint::Finite(int(-1)))
        );
        assert_eq!(m(1, 1, 0, 1).eval_ext(&ExtPoint::NegInf), Some(ExtPoint::NegInf));
    }

    #[test]
    fn fixed_points_of_each_kind() {
        assert_eq!(m(1, 3, 0, 1).fixed_points(), FixedPoints::Roots(vec![]));
        assert_eq!(
            m(2, -1, 0, 1).fixed_points(),
            FixedPoints::Roots(vec![Point::Rational(int(1))])
        );
        // 2t/(1+t): t = 0, 1
        assert_eq!(
            m(2, 0, 1, 1).fixed_points(),
            FixedPoints::Roots(vec![Point::Rational(int(0)), Point::Rational(int(1))])
        );
        // t/(1-t) is parabolic at 0
        assert_eq!(
            m(1, 0, -1, 1).fixed_points(),
            FixedPoints::Roots(vec![Point::Rational(int(0))])
        );
        // (2t+1)/(t+1): t^2 - t - 1 = 0
        match m(2, 1, 1, 1).fixed_points() {
            FixedPoints::Roots(r) => {
                assert_eq!(r.len(), 2);
                assert!(matches!(r[0], Point::Quadratic(_)));
                assert_eq!(r[0].to_string(), "(1-sqrt(5))/2");
                assert!(r[0] < r[1]);
            }
            FixedPoints::All => panic!(),
        }
        assert_eq!(FracLinearMap::identity().fixed_points(), FixedPoints::All);
    }

    #[test]
    fn display() {
        assert_eq!(m(1, 0, 0, 2).to_string(), "t/2");
        assert_eq!(m(2, -1, 0, 1).to_string(), "2t-1");
        assert_eq!(m(3, -1, 1, 0).to_string(), "(3t-1)/t");
        assert_eq!(m(1, 0, -1, 1).to_string(), "-t/(t-1)");
        assert_eq!(FracLinearMap::identity().to_string(), "t");
        assert_eq!(m(4, -1, 0, 4).to_string(), "t-1/4");
        assert_eq!(m(2, 1, 0, 4).to_string(), "t/2+1/4");
        assert_eq!(m(3, 2, 0, 2).to_string(), "3t/2+1");
    }
}
