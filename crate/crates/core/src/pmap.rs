//! Piecewise fractional-linear homeomorphisms.
//!
//! Elements act on the right: `compose(f, g)` is "first `f`, then `g`", so
//! that `x·(fg) = (x·f)·g`. Every constructor goes through
//! [`PiecewiseMap::canonicalize`], so two values are equal exactly when
//! they are the same function.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::flmap::{FixedPoints, FracLinearMap};
use crate::point::{ExtPoint, Point};
use crate::rational::{fmt_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Domain {
    Line,
    Interval { alpha: Rational, omega: Rational },
}

impl Domain {
    pub fn interval(alpha: Rational, omega: Rational) -> Result<Self> {
        if alpha >= omega {
            return Err(Error::precondition(format!(
                "interval domain needs alpha < omega, got {} >= {}",
                fmt_rational(&alpha),
                fmt_rational(&omega)
            )));
        }
        Ok(Domain::Interval { alpha, omega })
    }

    pub fn unit() -> Self {
        Domain::Interval {
            alpha: Rational::zero(),
            omega: Rational::one(),
        }
    }

    pub fn inf(&self) -> ExtPoint {
        match self {
            Domain::Line => ExtPoint::NegInf,
            Domain::Interval { alpha, .. } => ExtPoint::Finite(alpha.clone()),
        }
    }

    pub fn sup(&self) -> ExtPoint {
        match self {
            Domain::Line => ExtPoint::PosInf,
            Domain::Interval { omega, .. } => ExtPoint::Finite(omega.clone()),
        }
    }

    /// Closed domain membership for a rational.
    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Domain::Line => true,
            Domain::Interval { alpha, omega } => alpha <= x && x <= omega,
        }
    }

    pub fn contains_interior(&self, x: &Rational) -> bool {
        match self {
            Domain::Line => true,
            Domain::Interval { alpha, omega } => alpha < x && x < omega,
        }
    }

    pub fn contains_ext(&self, x: &ExtPoint) -> bool {
        match x {
            ExtPoint::Finite(r) => self.contains(r),
            _ => *self == Domain::Line,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Line => f.write_str("line"),
            Domain::Interval { alpha, omega } => {
                write!(f, "interval {} {}", fmt_rational(alpha), fmt_rational(omega))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    pub left: ExtPoint,
    pub right: ExtPoint,
    pub map: FracLinearMap,
}

impl Piece {
    pub fn new(left: ExtPoint, right: ExtPoint, map: FracLinearMap) -> Self {
        Piece { left, right, map }
    }
}

/// A maximal pointwise-fixed piece of the domain: an isolated point or a
/// closed interval (closed at its finite ends).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedComponent {
    Point(Point),
    Interval(Point, Point),
}

impl FixedComponent {
    pub fn lo(&self) -> &Point {
        match self {
            FixedComponent::Point(p) | FixedComponent::Interval(p, _) => p,
        }
    }

    pub fn hi(&self) -> &Point {
        match self {
            FixedComponent::Point(p) | FixedComponent::Interval(_, p) => p,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo().cmp_rational(x).is_le() && self.hi().cmp_rational(x).is_ge()
    }
}

impl fmt::Display for FixedComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedComponent::Point(p) => write!(f, "{{{p}}}"),
            FixedComponent::Interval(lo, hi) => {
                let l = if *lo == Point::NegInf { '(' } else { '[' };
                let r = if *hi == Point::PosInf { ')' } else { ']' };
                write!(f, "{l}{lo}, {hi}{r}")
            }
        }
    }
}

impl Serialize for FixedComponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An open interval with possibly irrational or infinite ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenInterval {
    pub lo: Point,
    pub hi: Point,
}

impl OpenInterval {
    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.cmp_rational(x).is_lt() && self.hi.cmp_rational(x).is_gt()
    }

    /// Some rational inside, the midpoint when both ends are rational.
    pub fn sample(&self) -> Rational {
        let one = Rational::from_integer(1.into());
        let x = match (self.lo.rational_above(), self.hi.rational_below()) {
            (Some(l), Some(h)) => crate::rational::midpoint(&l, &h),
            (Some(l), None) => l + one,
            (None, Some(h)) => h - one,
            (None, None) => Rational::from_integer(0.into()),
        };
        debug_assert!(self.contains(&x), "sample {x} outside {self}");
        x
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

impl Serialize for OpenInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiecewiseMap {
    domain: Domain,
    pieces: Vec<Piece>,
}

impl PiecewiseMap {
    pub fn identity(domain: Domain) -> Self {
        let pieces = vec![Piece::new(domain.inf(), domain.sup(), FracLinearMap::identity())];
        PiecewiseMap { domain, pieces }
    }

    /// Validates a piece list and merges adjacent pieces carrying the same map.
    pub fn canonicalize(domain: Domain, pieces: Vec<Piece>) -> Result<Self> {
        let (first, last) = match (pieces.first(), pieces.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(Error::EmptyPieces),
        };
        for p in &pieces {
            if p.left >= p.right {
                return Err(Error::NonMonotone(format!(
                    "piece [{}, {}] is empty or reversed",
                    p.left, p.right
                )));
            }
            if let Some(pole) = p.map.pole() {
                let pole = ExtPoint::Finite(pole);
                if p.left <= pole && pole <= p.right {
                    return Err(Error::PoleInPiece {
                        pole: pole.to_string(),
                        left: p.left.to_string(),
                        right: p.right.to_string(),
                    });
                }
            }
        }
        if first.left != domain.inf() || last.right != domain.sup() {
            return Err(Error::Tiling(format!(
                "pieces cover [{}, {}] but the domain is [{}, {}]",
                first.left,
                last.right,
                domain.inf(),
                domain.sup()
            )));
        }
        for w in pieces.windows(2) {
            if w[0].right != w[1].left {
                return Err(Error::Tiling(format!(
                    "gap or overlap between {} and {}",
                    w[0].right, w[1].left
                )));
            }
            let x = &w[0].right;
            let l = w[0].map.eval_ext(x);
            let r = w[1].map.eval_ext(x);
            if l != r {
                let show = |v: Option<ExtPoint>| v.map_or("pole".to_string(), |v| v.to_string());
                return Err(Error::Discontinuity {
                    at: x.to_string(),
                    left: show(l),
                    right: show(r),
                });
            }
        }
        if first.map.eval_ext(&first.left) != Some(domain.inf()) {
            return Err(Error::NotBijective(format!(
                "{} is not sent to itself",
                domain.inf()
            )));
        }
        if last.map.eval_ext(&last.right) != Some(domain.sup()) {
            return Err(Error::NotBijective(format!(
                "{} is not sent to itself",
                domain.sup()
            )));
        }
        Ok(Self::merged(domain, pieces))
    }

    fn merged(domain: Domain, pieces: Vec<Piece>) -> Self {
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match out.last_mut() {
                Some(prev) if prev.map == p.map => prev.right = p.right,
                _ => out.push(p),
            }
        }
        PiecewiseMap {
            domain,
            pieces: out,
        }
    }

    /// Builds an element from `(left, right, [a, b, c, d])` rows.
    pub fn from_rows(domain: Domain, rows: Vec<(ExtPoint, ExtPoint, [Rational; 4])>) -> Result<Self> {
        let pieces = rows
            .into_iter()
            .map(|(l, r, c)| Ok(Piece::new(l, r, FracLinearMap::from_rationals(&c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::canonicalize(domain, pieces)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].map.is_identity()
    }

    /// Interior breakpoints in increasing order.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.pieces[1..]
            .iter()
            .filter_map(|p| p.left.finite().cloned())
            .collect()
    }

    /// Index of the piece whose half-open span `[left, right)` holds `x`
    /// (the last piece for the right end of the domain).
    fn piece_index(&self, x: &Rational) -> usize {
        let i = self.pieces.partition_point(|p| match &p.right {
            ExtPoint::Finite(r) => r <= x,
            ExtPoint::PosInf => false,
            ExtPoint::NegInf => true,
        });
        i.min(self.pieces.len() - 1)
    }

    /// Map of the piece to the right of `x` (or at `x` for the right end).
    pub fn map_right_of(&self, x: &Rational) -> &FracLinearMap {
        &self.pieces[self.piece_index(x)].map
    }

    /// Map of the piece to the left of `x`.
    pub fn map_left_of(&self, x: &Rational) -> &FracLinearMap {
        let i = self.piece_index(x);
        let i = if self.pieces[i].left == ExtPoint::Finite(x.clone()) && i > 0 {
            i - 1
        } else {
            i
        };
        &self.pieces[i].map
    }

    pub fn first_map(&self) -> &FracLinearMap {
        &self.pieces[0].map
    }

    pub fn last_map(&self) -> &FracLinearMap {
        &self.pieces[self.pieces.len() - 1].map
    }

    /// Image of a rational in the domain; `None` outside it.
    pub fn apply(&self, x: &Rational) -> Option<Rational> {
        if !self.domain.contains(x) {
            return None;
        }
        self.map_right_of(x).eval(x)
    }

    pub fn evaluate(&self, x: &ExtPoint) -> Result<ExtPoint> {
        match x {
            ExtPoint::Finite(r) => self
                .apply(r)
                .map(ExtPoint::Finite)
                .ok_or_else(|| Error::OutOfDomain(x.to_string())),
            _ if self.domain == Domain::Line => Ok(x.clone()),
            _ => Err(Error::OutOfDomain(x.to_string())),
        }
    }

    pub fn fixes(&self, x: &Rational) -> bool {
        self.apply(x).as_ref() == Some(x)
    }

    /// "First `self`, then `g`".
    pub fn compose(&self, g: &PiecewiseMap) -> Result<Self> {
        if self.domain != g.domain {
            return Err(Error::DomainMismatch(
                self.domain.to_string(),
                g.domain.to_string(),
            ));
        }
        Ok(self.compose_unchecked(g))
    }

    fn compose_unchecked(&self, g: &PiecewiseMap) -> Self {
        let mut out = Vec::with_capacity(self.pieces.len() + g.pieces.len());
        for fp in &self.pieces {
            let img_l = fp.map.eval_ext(&fp.left).expect("valid piece");
            let img_r = fp.map.eval_ext(&fp.right).expect("valid piece");
            let inv = fp.map.inverse();
            let mut j = g.pieces.partition_point(|p| p.right <= img_l);
            while j < g.pieces.len() && g.pieces[j].left < img_r {
                let gp = &g.pieces[j];
                let lo = if gp.left <= img_l {
                    fp.left.clone()
                } else {
                    inv.eval_ext(&gp.left).expect("interior preimage")
                };
                let hi = if gp.right >= img_r {
                    fp.right.clone()
                } else {
                    inv.eval_ext(&gp.right).expect("interior preimage")
                };
                out.push(Piece::new(lo, hi, fp.map.then(&gp.map)));
                j += 1;
            }
        }
        Self::merged(self.domain.clone(), out)
    }

    pub fn inverse(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                Piece::new(
                    p.map.eval_ext(&p.left).expect("valid piece"),
                    p.map.eval_ext(&p.right).expect("valid piece"),
                    p.map.inverse(),
                )
            })
            .collect();
        PiecewiseMap {
            domain: self.domain.clone(),
            pieces,
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.domain.clone());
        let mut sq = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_unchecked(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose_unchecked(&sq);
            }
        }
        acc
    }

    /// `k⁻¹ self k`; its support is the image of the support under `k`.
    pub fn conjugate_by(&self, k: &PiecewiseMap) -> Result<Self> {
        k.inverse().compose(self)?.compose(k)
    }

    /// `self⁻¹ g⁻¹ self g`.
    pub fn commutator(&self, g: &PiecewiseMap) -> Result<Self> {
        self.inverse()
            .compose(&g.inverse())?
            .compose(self)?
            .compose(g)
    }

    pub fn commutes_with(&self, g: &PiecewiseMap) -> Result<bool> {
        Ok(self.compose(g)? == g.compose(self)?)
    }

    /// Exact set `{x : x·f = x}`: maximal closed intervals plus isolated points.
    pub fn fixed_set(&self) -> Vec<FixedComponent> {
        let mut comps: Vec<FixedComponent> = Vec::new();
        for p in &self.pieces {
            match p.map.fixed_points() {
                FixedPoints::All => {
                    let lo = Point::from(p.left.clone());
                    let hi = Point::from(p.right.clone());
                    match comps.last_mut() {
                        Some(last) if *last.hi() == lo => {
                            let start = last.lo().clone();
                            *last = FixedComponent::Interval(start, hi);
                        }
                        _ => comps.push(FixedComponent::Interval(lo, hi)),
                    }
                }
                FixedPoints::Roots(roots) => {
                    for r in roots {
                        if r.cmp_ext(&p.left).is_lt() || r.cmp_ext(&p.right).is_gt() {
                            continue;
                        }
                        if comps.last().is_some_and(|c| *c.hi() == r) {
                            continue;
                        }
                        comps.push(FixedComponent::Point(r));
                    }
                }
            }
        }
        comps
    }

    /// Maximal open intervals on which `x·f ≠ x`.
    pub fn support_components(&self) -> Vec<OpenInterval> {
        let mut out = Vec::new();
        let mut cursor = Point::from(self.domain.inf());
        for comp in self.fixed_set() {
            if *comp.lo() > cursor {
                out.push(OpenInterval {
                    lo: cursor,
                    hi: comp.lo().clone(),
                });
            }
            cursor = comp.hi().clone();
        }
        let sup = Point::from(self.domain.sup());
        if cursor < sup {
            out.push(OpenInterval { lo: cursor, hi: sup });
        }
        out
    }

    /// Smallest closed interval containing the support, as `(inf, sup)`.
    pub fn support_hull(&self) -> Option<(Point, Point)> {
        let comps = self.support_components();
        Some((comps.first()?.lo.clone(), comps.last()?.hi.clone()))
    }
}

impl fmt::Display for PiecewiseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "[{}, {}]: {}", p.left, p.right, p.map)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn fin(r: Rational) -> ExtPoint {
        ExtPoint::Finite(r)
    }

    fn m(a: i64, b: i64, c: i64, d: i64) -> FracLinearMap {
        FracLinearMap::from_ints(a, b, c, d).unwrap()
    }

    fn x0() -> PiecewiseMap {
        PiecewiseMap::canonicalize(
            Domain::unit(),
            vec![
                Piece::new(fin(int(0)), fin(rat(1, 2)), m(1, 0, 0, 2)),
                Piece::new(fin(rat(1, 2)), fin(rat(3, 4)), m(4, -1, 0, 4)),
                Piece::new(fin(rat(3, 4)), fin(int(1)), m(2, -1, 0, 1)),
            ],
        )
        .unwrap()
    }

    fn c_bump() -> PiecewiseMap {
        PiecewiseMap::canonicalize(
            Domain::Line,
            vec![
                Piece::new(ExtPoint::NegInf, fin(int(0)), FracLinearMap::identity()),
                Piece::new(fin(int(0)), fin(int(1)), m(2, 0, 1, 1)),
                Piece::new(fin(int(1)), ExtPoint::PosInf, FracLinearMap::identity()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn x0_squared_at_half() {
        let f = x0();
        let ff = f.compose(&f).unwrap();
        assert_eq!(ff.apply(&rat(1, 2)), Some(rat(1, 8)));
    }

    #[test]
    fn split_piece_merges_back() {
        let split = PiecewiseMap::canonicalize(
            Domain::unit(),
            vec![
                Piece::new(fin(int(0)), fin(rat(1, 4)), m(1, 0, 0, 2)),
                Piece::new(fin(rat(1, 4)), fin(rat(1, 2)), m(1, 0, 0, 2)),
                Piece::new(fin(rat(1, 2)), fin(rat(3, 4)), m(4, -1, 0, 4)),
                Piece::new(fin(rat(3, 4)), fin(int(1)), m(2, -1, 0, 1)),
            ],
        )
        .unwrap();
        assert_eq!(split.pieces().len(), 3);
        assert_eq!(split, x0());
    }

    #[test]
    fn distinct_validation_errors() {
        let d = Domain::unit();
        assert_eq!(
            PiecewiseMap::canonicalize(d.clone(), vec![]),
            Err(Error::EmptyPieces)
        );
        let discont = PiecewiseMap::canonicalize(
            d.clone(),
            vec![
                Piece::new(fin(int(0)), fin(rat(1, 2)), m(1, 0, 0, 2)),
                Piece::new(fin(rat(1, 2)), fin(int(1)), FracLinearMap::identity()),
            ],
        );
        assert!(matches!(discont, Err(Error::Discontinuity { .. })));
        let pole = PiecewiseMap::canonicalize(
            Domain::Line,
            vec![
                Piece::new(ExtPoint::NegInf, fin(int(0)), FracLinearMap::identity()),
                Piece::new(fin(int(0)), fin(int(2)), m(1, 0, -1, 1)),
                Piece::new(fin(int(2)), ExtPoint::PosInf, FracLinearMap::identity()),
            ],
        );
        assert!(matches!(pole, Err(Error::PoleInPiece { .. })));
        let reversed = PiecewiseMap::canonicalize(
            d,
            vec![Piece::new(fin(int(1)), fin(int(0)), FracLinearMap::identity())],
        );
        assert!(matches!(reversed, Err(Error::NonMonotone(_))));
    }

    #[test]
    fn unbounded_projective_piece_is_not_bijective() {
        let r = PiecewiseMap::canonicalize(
            Domain::Line,
            vec![Piece::new(ExtPoint::NegInf, ExtPoint::PosInf, m(2, 1, 0, 1))],
        );
        assert!(r.is_ok());
        let r = PiecewiseMap::canonicalize(
            Domain::Line,
            vec![
                Piece::new(ExtPoint::NegInf, fin(int(0)), m(1, 0, -1, 1)),
                Piece::new(fin(int(0)), ExtPoint::PosInf, FracLinearMap::identity()),
            ],
        );
        assert!(matches!(r, Err(Error::NotBijective(_))));
    }

    #[test]
    fn inverse_cancels() {
        let c = c_bump();
        let ci = c.inverse();
        assert_eq!(ci.apply(&rat(2, 3)), Some(rat(1, 2)));
        assert!(c.compose(&ci).unwrap().is_identity());
        assert!(ci.compose(&c).unwrap().is_identity());
    }

    #[test]
    fn fixed_set_and_support_of_bump() {
        let c = c_bump();
        let fixed: Vec<String> = c.fixed_set().iter().map(|f| f.to_string()).collect();
        assert_eq!(fixed, vec!["(-inf, 0]", "[1, inf)"]);
        let supp: Vec<String> = c.support_components().iter().map(|s| s.to_string()).collect();
        assert_eq!(supp, vec!["(0, 1)"]);
    }

    #[test]
    fn identity_fixes_everything() {
        let id = PiecewiseMap::identity(Domain::unit());
        assert_eq!(id.fixed_set().len(), 1);
        assert!(id.support_components().is_empty());
        let line = PiecewiseMap::identity(Domain::Line);
        assert_eq!(line.fixed_set()[0].to_string(), "(-inf, inf)");
    }

    #[test]
    fn translation_has_full_support() {
        let a = PiecewiseMap::canonicalize(
            Domain::Line,
            vec![Piece::new(ExtPoint::NegInf, ExtPoint::PosInf, m(1, 1, 0, 1))],
        )
        .unwrap();
        assert!(a.fixed_set().is_empty());
        assert_eq!(a.support_components()[0].to_string(), "(-inf, inf)");
        assert_eq!(a.evaluate(&ExtPoint::PosInf), Ok(ExtPoint::PosInf));
    }

    #[test]
    fn powers_and_commutators() {
        let f = x0();
        assert_eq!(f.pow(3), f.compose(&f).unwrap().compose(&f).unwrap());
        assert_eq!(f.pow(-2), f.inverse().pow(2));
        assert!(f.commutator(&f).unwrap().is_identity());
        let g = f.conjugate_by(&f).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn domain_mismatch() {
        let a = PiecewiseMap::identity(Domain::Line);
        let b = PiecewiseMap::identity(Domain::unit());
        assert!(matches!(a.compose(&b), Err(Error::DomainMismatch(..))));
    }
}
