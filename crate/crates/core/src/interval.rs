//! Intervals with rational ends, used as inputs and targets of witnesses.
//! Whether an interval is read as open or closed is up to the caller.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pmap::PiecewiseMap;
use crate::rational::{fmt_rational, int, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::precondition(format!(
                "interval [{}, {}] is reversed",
                fmt_rational(&lo),
                fmt_rational(&hi)
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    /// `a,b`, optionally wrapped in brackets or parentheses.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix(['[', '('])
            .and_then(|t| t.strip_suffix([']', ')']))
            .unwrap_or(s);
        let (a, b) = s.split_once(',')?;
        let (lo, hi) = (parse_rational(a.trim())?, parse_rational(b.trim())?);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_open(&self, x: &Rational) -> bool {
        self.lo < *x && *x < self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn is_disjoint_from(&self, other: &Interval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    /// Closed middle half.
    pub fn core(&self) -> Interval {
        let q = self.length() / int(4);
        Interval {
            lo: &self.lo + &q,
            hi: &self.hi - &q,
        }
    }

    /// Image under an increasing map, computed at the endpoints.
    pub fn image(&self, f: &PiecewiseMap) -> Result<Interval> {
        let at = |x: &Rational| f.apply(x).ok_or_else(|| Error::OutOfDomain(fmt_rational(x)));
        Ok(Interval {
            lo: at(&self.lo)?,
            hi: at(&self.hi)?,
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rational(&self.lo), fmt_rational(&self.hi))
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
