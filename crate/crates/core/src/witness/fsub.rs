//! Subgroups isomorphic to Thompson's group F from a ray element and a
//! mirrored ray element.
//!
//! With `f` trivial near the lower end and increasing near the upper end,
//! and `g` the mirror image, conjugate `g` by `h` so that its last fixed
//! point lies above every fixed point of `f`. For suitable powers
//! `a = g₁ⁿ`, `b = fᵐ` both relators of the two-relator presentation of F
//! vanish; since every proper quotient of F is abelian, a non-commuting
//! pair generates a copy of F.

use serde::Serialize;

use super::relations::{check_f_relations, RelationCheck};
use super::{bracket, extreme_fixed_points, iterate_until, Elt, Kit};
use crate::error::{Error, Result};
use crate::germ::germ_quotient_image;
use crate::pmap::PiecewiseMap;
use crate::point::Point;
use crate::rational::Rational;
use crate::search::SearchBudget;
use crate::spec::GroupSpec;
use crate::word::Word;

/// Candidate exponent pairs tried beyond the proof bound before giving up.
const MAX_PAIRS: usize = 400;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonCommutingPoint {
    #[serde(serialize_with = "crate::rational::ser::one")]
    pub point: Rational,
    /// `x·ab`.
    #[serde(serialize_with = "crate::rational::ser::one")]
    pub via_ab: Rational,
    /// `x·ba`.
    #[serde(serialize_with = "crate::rational::ser::one")]
    pub via_ba: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct FCertificate {
    /// `f` and `g` as given, possibly inverted so that `f` increases near
    /// the upper end and `g` near the lower end.
    pub f_word: Word,
    pub g_word: Word,
    pub h_word: Word,
    pub m: i64,
    pub n: i64,
    /// `a = (h⁻¹gh)ⁿ` and `b = fᵐ`.
    pub a_word: Word,
    pub b_word: Word,
    /// Exponents for which the relations hold by the displacement argument.
    pub proof_bound: (i64, i64),
    pub relations_hold: bool,
    pub nonabelian_witness: NonCommutingPoint,
}

impl FCertificate {
    pub fn replay(&self, spec: &GroupSpec) -> Result<bool> {
        let (a, b) = (spec.evaluate(&self.a_word)?, spec.evaluate(&self.b_word)?);
        let g1 = spec.evaluate(&self.g_word.conjugate_by(&self.h_word))?;
        let f = spec.evaluate(&self.f_word)?;
        if a != g1.pow(self.n) || b != f.pow(self.m) {
            return Ok(false);
        }
        let w = &self.nonabelian_witness;
        let ab = a.compose(&b)?.apply(&w.point);
        let ba = b.compose(&a)?.apply(&w.point);
        Ok(self.relations_hold
            && check_f_relations(&a, &b)?.certifies()
            && ab.as_ref() == Some(&w.via_ab)
            && ba.as_ref() == Some(&w.via_ba)
            && w.via_ab != w.via_ba)
    }
}

/// Orients `e` to increase at the sample point of its first or last
/// component of support.
fn orient(e: Elt, at_top: bool) -> Elt {
    let mut comps = e.map.support_components();
    let c = if at_top { comps.pop() } else { comps.into_iter().next() };
    let x = c.expect("nontrivial").sample();
    if e.apply(&x) < x {
        e.inverse()
    } else {
        e
    }
}

fn non_commuting_point(a: &PiecewiseMap, b: &PiecewiseMap) -> Result<Option<NonCommutingPoint>> {
    let ab = a.compose(b)?;
    let ba = b.compose(a)?;
    let diff = ab.compose(&ba.inverse())?;
    Ok(diff.support_components().first().map(|c| {
        let x = c.sample();
        NonCommutingPoint {
            via_ab: ab.apply(&x).expect("in domain"),
            via_ba: ba.apply(&x).expect("in domain"),
            point: x,
        }
    }))
}

pub fn f_subgroup_certificate(spec: &GroupSpec, f_word: &Word, g_word: &Word, budget: &SearchBudget) -> Result<FCertificate> {
    let kit = Kit::new(spec, budget);
    let f = kit.elt(f_word.clone())?;
    let g = kit.elt(g_word.clone())?;
    let (f_lo, f_hi) = germ_quotient_image(&f.map);
    if !f_lo.is_trivial() || f_hi.is_trivial() {
        return Err(Error::precondition(format!(
            "{f_word} must be trivial near the lower end and not near the upper end"
        )));
    }
    let (g_lo, g_hi) = germ_quotient_image(&g.map);
    if g_lo.is_trivial() || !g_hi.is_trivial() {
        return Err(Error::precondition(format!(
            "{g_word} must be trivial near the upper end and not near the lower end"
        )));
    }
    let f = orient(f, true);
    let g = orient(g, false);
    let (_, r1) = extreme_fixed_points(&f.map).expect("trivial lower germ leaves fixed points");
    let r2 = f.map.support_components().remove(0).lo;
    let (p1, _) = extreme_fixed_points(&g.map).expect("trivial upper germ leaves fixed points");
    let (_, r1_hi) = bracket(&r1)?;
    let (p1_lo, _) = bracket(&p1)?;
    // move the increasing end of g past every fixed point of f
    let h = if p1_lo > r1_hi {
        Elt::identity(spec)
    } else {
        kit.send_into(&[p1_lo], &Point::Rational(r1_hi.clone()), &Point::PosInf)?
    };
    let g1 = g.conj(&h);
    let s = g1.map.support_components().pop().expect("nontrivial").hi;
    let (_, s_hi) = bracket(&s)?;
    let (r2_lo, _) = bracket(&r2)?;
    let stalled = || Error::Internal("ray element stalls".into());
    let (n0, r3) = iterate_until(&g1.map, &r2_lo, |y| *y > r1_hi).ok_or_else(stalled)?;
    let (m0, _) = iterate_until(&f.map, &r3, |y| *y > s_hi).ok_or_else(stalled)?;

    let pairs = (2..)
        .flat_map(|total: i64| (1..total).map(move |m| (m, total - m)))
        .take_while(|&(m, n)| m + n <= m0 + n0 || m + n <= 2)
        .chain(std::iter::once((m0, n0)));
    for (tried, (m, n)) in pairs.enumerate() {
        if tried >= MAX_PAIRS && (m, n) != (m0, n0) {
            continue;
        }
        let a = g1.pow(n);
        let b = f.pow(m);
        if !matches!(check_f_relations(&a.map, &b.map)?, RelationCheck::Holds { abelian: false }) {
            continue;
        }
        let Some(witness) = non_commuting_point(&a.map, &b.map)? else {
            continue;
        };
        return Ok(FCertificate {
            f_word: f.word.clone(),
            g_word: g.word.clone(),
            h_word: h.word.clone(),
            m,
            n,
            a_word: a.word,
            b_word: b.word,
            proof_bound: (m0, n0),
            relations_hold: true,
            nonabelian_witness: witness,
        });
    }
    Err(Error::Internal(format!("relations fail at the proof bound m = {m0}, n = {n0}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_str;

    #[test]
    fn dyadic_certificate() {
        let d = build_str("f-dyadic").unwrap();
        let budget = SearchBudget::default();
        let f = Word::parse("x1").unwrap();
        let g = Word::parse("x0 x1^-1").unwrap();
        let c = f_subgroup_certificate(&d, &f, &g, &budget).unwrap();
        assert!(c.relations_hold);
        assert!(c.replay(&d).unwrap());
        assert!(c.m + c.n <= c.proof_bound.0 + c.proof_bound.1);
        assert!(f_subgroup_certificate(&d, &Word::empty(), &g, &budget).is_err());
    }

    #[test]
    fn projective_certificate() {
        let p = build_str("f-projective").unwrap();
        let budget = SearchBudget::default();
        let f = Word::parse("b").unwrap();
        // trivial near +∞, moving every point near -∞
        let g = Word::parse("a b^-1").unwrap();
        let c = f_subgroup_certificate(&p, &f, &g, &budget).unwrap();
        assert!(c.replay(&p).unwrap());
    }
}
