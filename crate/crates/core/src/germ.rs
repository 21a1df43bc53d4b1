//! One-sided germs and groups of germs.
//!
//! For a finite-piece map the germ at a fixed point is the map of the
//! adjacent piece, so germs are compared as fractional-linear maps. At
//! `+∞` only the left germ exists and at `-∞` only the right one; on an
//! interval domain the ends take the inward side.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flmap::FracLinearMap;
use crate::pmap::{Domain, PiecewiseMap};
use crate::point::ExtPoint;
use crate::rational::{fmt_rational, Rational};
use crate::search::{for_each_element, SearchBudget};
use crate::spec::GroupSpec;
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l" | "left" => Ok(Side::Left),
            "r" | "right" => Ok(Side::Right),
            _ => Err(Error::InvalidSide(format!("`{s}` is not l or r"))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Germ {
    pub base: ExtPoint,
    pub side: Side,
    pub rep: FracLinearMap,
}

impl Germ {
    pub fn is_trivial(&self) -> bool {
        self.rep.is_identity()
    }

    /// `self` then `other`.
    pub fn product(&self, other: &Germ) -> Result<Germ> {
        if self.base != other.base || self.side != other.side {
            return Err(Error::GermMismatch);
        }
        Ok(Germ {
            base: self.base.clone(),
            side: self.side,
            rep: self.rep.then(&other.rep),
        })
    }

    pub fn inverse(&self) -> Germ {
        Germ {
            base: self.base.clone(),
            side: self.side,
            rep: self.rep.inverse(),
        }
    }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {} ({})", self.rep, self.base, self.side)
    }
}

/// Sides at which a germ at `base` exists in `domain`.
fn check_side(domain: &Domain, base: &ExtPoint, side: Side) -> Result<()> {
    if !domain.contains_ext(base) {
        return Err(Error::OutOfDomain(base.to_string()));
    }
    let forbidden = if *base == domain.inf() {
        Some(Side::Left)
    } else if *base == domain.sup() {
        Some(Side::Right)
    } else {
        None
    };
    if forbidden == Some(side) {
        return Err(Error::InvalidSide(format!("no {side} germ at {base}")));
    }
    Ok(())
}

pub fn germ_at(f: &PiecewiseMap, base: &ExtPoint, side: Side) -> Result<Germ> {
    check_side(f.domain(), base, side)?;
    let rep = match base {
        ExtPoint::NegInf => f.first_map().clone(),
        ExtPoint::PosInf => f.last_map().clone(),
        ExtPoint::Finite(x) => {
            if !f.fixes(x) {
                return Err(Error::NotFixed(fmt_rational(x)));
            }
            match side {
                Side::Right => f.map_right_of(x).clone(),
                Side::Left => f.map_left_of(x).clone(),
            }
        }
    };
    Ok(Germ {
        base: base.clone(),
        side,
        rep,
    })
}

pub fn germ_product(g1: &Germ, g2: &Germ) -> Result<Germ> {
    g1.product(g2)
}

/// Germs at the two ends of the domain: the right germ at the lower end and
/// the left germ at the upper end.
pub fn germ_quotient_image(f: &PiecewiseMap) -> (Germ, Germ) {
    let d = f.domain();
    let lo = germ_at(f, &d.inf(), Side::Right).expect("ends are fixed");
    let hi = germ_at(f, &d.sup(), Side::Left).expect("ends are fixed");
    (lo, hi)
}

/// Refines integers > 1 into a pairwise coprime set over which each of them
/// factors.
fn coprime_base(values: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = values.iter().filter(|v| **v > BigInt::one()).cloned().collect();
    loop {
        base.sort();
        base.dedup();
        let mut split = None;
        'outer: for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    split = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        let Some((i, j, g)) = split else {
            return base;
        };
        let (x, y) = (&base[i] / &g, &base[j] / &g);
        base.remove(j);
        base.remove(i);
        base.extend([g, x, y].into_iter().filter(|v| *v > BigInt::one()));
    }
}

fn exponent_over(mut n: BigInt, base: &BigInt) -> i64 {
    let mut e = 0;
    while (&n % base).is_zero() {
        n /= base;
        e += 1;
    }
    e
}

/// Rank of an integer matrix by fraction-free elimination over the rationals.
pub(crate) fn matrix_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let factor = &m[r][c] / &m[rank][c];
                for k in c..cols {
                    let v = &factor * &m[rank][k];
                    m[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the subgroup of `(Q_{>0}, ·)` generated by `slopes`.
pub fn slope_group_rank(slopes: &[Rational]) -> Result<usize> {
    for s in slopes {
        if !s.is_positive() {
            return Err(Error::NonPositiveSlope(fmt_rational(s)));
        }
    }
    let ints: Vec<BigInt> = slopes
        .iter()
        .flat_map(|s| [s.numer().clone(), s.denom().clone()])
        .collect();
    let base = coprime_base(&ints);
    let rows: Vec<Vec<i64>> = slopes
        .iter()
        .map(|s| {
            base.iter()
                .map(|b| exponent_over(s.numer().clone(), b) - exponent_over(s.denom().clone(), b))
                .collect()
        })
        .collect();
    Ok(matrix_rank(&rows))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum GermClass {
    Trivial,
    AbelianRank { rank: usize },
    /// Indices into the report's germ list of a non-commuting pair.
    Nonabelian { first: usize, second: usize },
    Unsupported { reason: String },
}

impl GermClass {
    pub fn rank(&self) -> Option<usize> {
        match self {
            GermClass::Trivial => Some(0),
            GermClass::AbelianRank { rank } => Some(*rank),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportSource {
    Germs,
    Survey,
    Metadata,
}

#[derive(Debug, Clone, Serialize)]
pub struct GermGroupReport {
    pub classification: GermClass,
    pub basis_note: String,
    pub is_lower_bound: bool,
    pub source: ReportSource,
    /// Distinct nontrivial germs examined.
    pub germs: Vec<Germ>,
    /// For surveys, the shortlex-least word realizing each germ.
    pub words: Vec<Word>,
}

impl GermGroupReport {
    /// Word pair of a nonabelian witness, when the report came from a survey.
    pub fn witness_words(&self) -> Option<(&Word, &Word)> {
        match self.classification {
            GermClass::Nonabelian { first, second } => Some((self.words.get(first)?, self.words.get(second)?)),
            _ => None,
        }
    }

    pub fn witness_germs(&self) -> Option<(&Germ, &Germ)> {
        match self.classification {
            GermClass::Nonabelian { first, second } => Some((&self.germs[first], &self.germs[second])),
            _ => None,
        }
    }
}

fn classify_germs(germs: &[Germ]) -> Result<(GermClass, String)> {
    if let Some(g) = germs.first() {
        if germs.iter().any(|h| h.base != g.base || h.side != g.side) {
            return Err(Error::GermMismatch);
        }
    }
    for i in 0..germs.len() {
        for j in i + 1..germs.len() {
            if !germs[i].rep.commutes_with(&germs[j].rep) {
                return Ok((
                    GermClass::Nonabelian { first: i, second: j },
                    format!("{} and {} do not commute", germs[i].rep, germs[j].rep),
                ));
            }
        }
    }
    let nontrivial: Vec<&Germ> = germs.iter().filter(|g| !g.is_trivial()).collect();
    if nontrivial.is_empty() {
        return Ok((GermClass::Trivial, "all germs trivial".into()));
    }
    if nontrivial.iter().all(|g| g.rep.is_translation()) {
        // finitely generated subgroups of (Q, +) are cyclic
        return Ok((
            GermClass::AbelianRank { rank: 1 },
            "translation germs; rank of a translation group is at most 1".into(),
        ));
    }
    if nontrivial.iter().all(|g| g.rep.is_affine()) {
        let slopes: Vec<Rational> = nontrivial.iter().map(|g| g.rep.slope().expect("affine")).collect();
        let rank = slope_group_rank(&slopes)?;
        let shown: Vec<String> = slopes.iter().map(fmt_rational).collect();
        return Ok((
            GermClass::AbelianRank { rank },
            format!("slope group generated by {}", shown.join(", ")),
        ));
    }
    Ok((
        GermClass::Unsupported {
            reason: "mixed or projective germ class".into(),
        },
        "non-affine germs are not analyzed".into(),
    ))
}

pub fn germ_group_report(germs: &[Germ], is_exhaustive: bool) -> Result<GermGroupReport> {
    let (classification, basis_note) = classify_germs(germs)?;
    Ok(GermGroupReport {
        classification,
        basis_note,
        is_lower_bound: !is_exhaustive,
        source: ReportSource::Germs,
        germs: germs.to_vec(),
        words: vec![],
    })
}

/// Default node cap for surveys.
pub const SURVEY_NODES: usize = 2_000_000;

pub fn germ_survey(spec: &GroupSpec, base: &ExtPoint, side: Side, depth: usize) -> Result<GermGroupReport> {
    germ_survey_with_budget(spec, base, side, depth, SURVEY_NODES)
}

/// Germs of all elements of word length at most `depth` fixing `base`.
/// The report is a lower bound unless the spec metadata declares the slope
/// group and it applies at `base` (see [`metadata_slope_rank`]).
pub fn germ_survey_with_budget(
    spec: &GroupSpec,
    base: &ExtPoint,
    side: Side,
    depth: usize,
    max_nodes: usize,
) -> Result<GermGroupReport> {
    check_side(&spec.domain, base, side)?;
    let mut germs: Vec<Germ> = Vec::new();
    let mut words: Vec<Word> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    if depth > 0 {
        let budget = SearchBudget::new(max_nodes, depth)?;
        for_each_element(spec, &budget, |w, g| {
            let fixed = match base {
                ExtPoint::Finite(x) => g.fixes(x),
                _ => true,
            };
            if !fixed {
                return;
            }
            let germ = germ_at(g, base, side).expect("checked fixed");
            if !germ.is_trivial() && seen.insert(germ.rep.clone()) {
                germs.push(germ);
                words.push(w.clone());
            }
        })?;
    }
    let (classification, note) = classify_germs(&germs)?;
    let mut report = GermGroupReport {
        classification,
        basis_note: format!("{note}; survey of words up to length {depth}"),
        is_lower_bound: true,
        source: ReportSource::Survey,
        germs,
        words,
    };
    if let Some((rank, why)) = metadata_slope_rank(spec, base)? {
        match report.classification.rank() {
            Some(k) if k <= rank => {
                report.classification = GermClass::AbelianRank { rank };
                report.is_lower_bound = false;
                report.source = ReportSource::Metadata;
                report.basis_note = format!("{why}; survey found rank {k} at depth {depth}");
            }
            _ => {
                report.basis_note = format!("{}; contradicts metadata ({why})", report.basis_note);
            }
        }
    }
    Ok(report)
}

/// Rank of the declared slope group, when it is the exact germ group at
/// `base`: the spec must be piecewise linear on a compact interval and
/// `base` an end of the domain or a point of the declared breakpoint ring
/// `Z[1/n]`.
pub fn metadata_slope_rank(spec: &GroupSpec, base: &ExtPoint) -> Result<Option<(usize, String)>> {
    let m = &spec.metadata;
    if !m.declares_slope_group() || spec.domain == Domain::Line {
        return Ok(None);
    }
    if !spec
        .generators()
        .iter()
        .all(|g| g.map.pieces().iter().all(|p| p.map.is_affine()))
    {
        return Ok(None);
    }
    let at_end = *base == spec.domain.inf() || *base == spec.domain.sup();
    let in_ring = match (base, m.breakpoints.as_deref().and_then(ring_denominator)) {
        (ExtPoint::Finite(x), Some(n)) => crate::rational::denominator_divides_power_of(x, &n),
        _ => false,
    };
    if !at_end && !in_ring {
        return Ok(None);
    }
    let slopes: Vec<Rational> = if m.slope_primes.is_empty() {
        m.slope_generators.clone()
    } else {
        m.slope_primes
            .iter()
            .map(|&p| Rational::from_integer(BigInt::from(p)))
            .collect()
    };
    let rank = slope_group_rank(&slopes)?;
    let shown: Vec<String> = slopes.iter().map(fmt_rational).collect();
    Ok(Some((rank, format!("metadata slope group <{}>", shown.join(", ")))))
}

/// `n` from a breakpoint note of the form `Z[1/n]`.
fn ring_denominator(note: &str) -> Option<BigInt> {
    note.trim()
        .strip_prefix("Z[1/")?
        .strip_suffix(']')?
        .parse()
        .ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_str;
    use crate::rational::{int, rat};

    #[test]
    fn translation_germ_at_infinity() {
        let spec = build_str("f-projective").unwrap();
        let a = spec.generator("a").unwrap();
        let g = germ_at(a, &ExtPoint::PosInf, Side::Left).unwrap();
        assert_eq!(g.rep, FracLinearMap::translation(&int(1)));
        assert!(germ_at(a, &ExtPoint::PosInf, Side::Right).is_err());
    }

    #[test]
    fn x1_germ_at_half() {
        let spec = build_str("f-dyadic").unwrap();
        let x1 = spec.generator("x1").unwrap();
        let g = germ_at(x1, &ExtPoint::Finite(rat(1, 2)), Side::Right).unwrap();
        assert_eq!(g.rep.slope(), Some(rat(1, 2)));
        assert_eq!(g.rep.eval(&rat(1, 2)), Some(rat(1, 2)));
        let x0 = spec.generator("x0").unwrap();
        assert!(matches!(
            germ_at(x0, &ExtPoint::Finite(rat(1, 2)), Side::Right),
            Err(Error::NotFixed(_))
        ));
    }

    #[test]
    fn products_and_translations() {
        let t = |by: i64| Germ {
            base: ExtPoint::PosInf,
            side: Side::Left,
            rep: FracLinearMap::translation(&int(by)),
        };
        assert_eq!(t(1).product(&t(2)).unwrap(), t(3));
        assert!(t(1).product(&t(1).inverse()).unwrap().is_trivial());
    }

    #[test]
    fn slope_ranks() {
        assert_eq!(slope_group_rank(&[int(1)]).unwrap(), 0);
        assert_eq!(slope_group_rank(&[int(2), int(3)]).unwrap(), 2);
        assert_eq!(slope_group_rank(&[int(4), int(8)]).unwrap(), 1);
        assert_eq!(slope_group_rank(&[int(6), rat(2, 3), int(4)]).unwrap(), 2);
        assert_eq!(slope_group_rank(&[]).unwrap(), 0);
        assert!(slope_group_rank(&[int(0)]).is_err());
    }

    #[test]
    fn nonabelian_pair_at_infinity() {
        let mk = |m: FracLinearMap| Germ {
            base: ExtPoint::PosInf,
            side: Side::Left,
            rep: m,
        };
        let germs = [
            mk(FracLinearMap::from_ints(2, 0, 0, 1).unwrap()),
            mk(FracLinearMap::translation(&int(1))),
        ];
        let r = germ_group_report(&germs, true).unwrap();
        assert_eq!(r.classification, GermClass::Nonabelian { first: 0, second: 1 });
        assert_eq!(germ_group_report(&[], true).unwrap().classification, GermClass::Trivial);
    }

    #[test]
    fn end_germs() {
        let spec = build_str("broken-bs:2").unwrap();
        let (lo, hi) = germ_quotient_image(spec.generator("b+").unwrap());
        assert_eq!(lo.rep.slope(), Some(int(2)));
        assert!(hi.is_trivial());
    }

    #[test]
    fn survey_depth_zero_is_trivial() {
        let spec = build_str("broken-bs:2").unwrap();
        let r = germ_survey(&spec, &ExtPoint::PosInf, Side::Left, 0).unwrap();
        assert_eq!(r.classification, GermClass::Trivial);
        assert!(r.is_lower_bound);
    }
}
