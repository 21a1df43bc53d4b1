//! Exact rationals and the textual forms used throughout the crate.
//!
//! `Rational` is `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// `n/d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or a bare integer. Rejects a zero denominator and anything
/// that is not plain decimal digits with an optional leading sign.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let n = parse_int(n)?;
    let d = match d {
        Some(d) => {
            if d.starts_with(['+', '-']) {
                return None;
            }
            parse_int(d)?
        }
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical text: `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    })
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// True when every prime factor of the denominator of `r` divides `n`.
pub fn denominator_divides_power_of(r: &Rational, n: &BigInt) -> bool {
    let mut d = r.denom().clone();
    loop {
        let g = d.gcd(n);
        if g.is_one() {
            return d.is_one();
        }
        while (&d % &g).is_zero() {
            d /= &g;
        }
    }
}

/// `serialize_with` helpers writing rationals in their canonical text form.
pub mod ser {
    use serde::Serializer;

    use super::{fmt_rational, Rational};

    pub fn one<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn many<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt_rational))
    }

    pub fn opt<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_some(&fmt_rational(r)),
            None => s.serialize_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/2"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-3"), Some(int(-3)));
        assert_eq!(parse_rational("4/8"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-2/6"), Some(rat(-1, 3)));
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1/-2"), None);
        assert_eq!(parse_rational("a"), None);
        assert_eq!(parse_rational(""), None);
        assert_eq!(parse_rational("1.5"), None);
        assert_eq!(parse_rational("1/"), None);
    }

    #[test]
    fn formatting_is_canonical() {
        assert_eq!(fmt_rational(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rational(&rat(-8, 4)), "-2");
        assert_eq!(fmt_rational(&int(0)), "0");
    }

    #[test]
    fn denominator_support() {
        let six = BigInt::from(6);
        assert!(denominator_divides_power_of(&rat(5, 36), &six));
        assert!(denominator_divides_power_of(&int(3), &six));
        assert!(!denominator_divides_power_of(&rat(1, 10), &six));
    }
}
