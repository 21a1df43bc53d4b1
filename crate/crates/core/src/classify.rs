//! Element types by end germs and fixed points, and orbitals of a group.
//!
//! On an interval domain the lower and upper endpoints play the roles of
//! `-∞` and `+∞`.

use serde::Serialize;

use crate::error::Result;
use crate::germ::{germ_quotient_image, germ_survey, GermClass, Side};
use crate::pmap::{FixedComponent, PiecewiseMap};
use crate::point::{ExtPoint, Point};
use crate::spec::GroupSpec;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ElementType {
    Identity,
    CompactlySupported,
    /// Trivial germ at the upper end only.
    TypeA,
    /// Trivial germ at the lower end only.
    TypeB,
    /// Both end germs nontrivial, with extreme interior fixed points `r ≤ s`.
    TypeC { r: Point, s: Point },
    FullySupported,
}

impl ElementType {
    pub fn tag(&self) -> &'static str {
        match self {
            ElementType::Identity => "identity",
            ElementType::CompactlySupported => "compactly_supported",
            ElementType::TypeA => "type_a",
            ElementType::TypeB => "type_b",
            ElementType::TypeC { .. } => "type_c",
            ElementType::FullySupported => "fully_supported",
        }
    }
}

/// Fixed components of `f` other than the domain ends themselves.
pub(crate) fn interior_fixed(f: &PiecewiseMap) -> Vec<FixedComponent> {
    let inf = Point::from(f.domain().inf());
    let sup = Point::from(f.domain().sup());
    f.fixed_set()
        .into_iter()
        .filter(|c| !matches!(c, FixedComponent::Point(p) if *p == inf || *p == sup))
        .collect()
}

pub fn classify_element(f: &PiecewiseMap) -> ElementType {
    if f.is_identity() {
        return ElementType::Identity;
    }
    let (lo, hi) = germ_quotient_image(f);
    match (lo.is_trivial(), hi.is_trivial()) {
        (true, true) => ElementType::CompactlySupported,
        (false, true) => ElementType::TypeA,
        (true, false) => ElementType::TypeB,
        (false, false) => {
            let fixed = interior_fixed(f);
            match (fixed.first(), fixed.last()) {
                (Some(first), Some(last)) => ElementType::TypeC {
                    r: first.lo().clone(),
                    s: last.hi().clone(),
                },
                _ => ElementType::FullySupported,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitalKind {
    Orbital,
    Fixed,
}

/// A closed piece of the decomposition of the domain; ends at infinity are
/// open.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomainPiece {
    pub kind: OrbitalKind,
    pub lo: Point,
    pub hi: Point,
}

impl DomainPiece {
    pub fn contains(&self, x: &crate::rational::Rational) -> bool {
        self.lo.cmp_rational(x).is_le() && self.hi.cmp_rational(x).is_ge()
    }
}

/// Orbitals (components of the union of generator supports) and the
/// intervals fixed by every generator between them, in order. Adjacent
/// orbitals sharing an end are separated by a degenerate fixed piece.
pub fn group_orbitals(spec: &GroupSpec) -> Vec<DomainPiece> {
    let mut comps: Vec<(Point, Point)> = spec
        .generators()
        .iter()
        .flat_map(|g| g.map.support_components())
        .map(|c| (c.lo, c.hi))
        .collect();
    comps.sort();
    let mut merged: Vec<(Point, Point)> = Vec::new();
    for (lo, hi) in comps {
        match merged.last_mut() {
            Some(last) if lo < last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    let mut out = Vec::new();
    let mut cursor = Point::from(spec.domain.inf());
    let fixed = |lo: Point, hi: Point| DomainPiece {
        kind: OrbitalKind::Fixed,
        lo,
        hi,
    };
    for (lo, hi) in merged {
        if lo > cursor || !out.is_empty() {
            out.push(fixed(cursor.clone(), lo.clone()));
        }
        out.push(DomainPiece {
            kind: OrbitalKind::Orbital,
            lo,
            hi: hi.clone(),
        });
        cursor = hi;
    }
    let sup = Point::from(spec.domain.sup());
    if cursor < sup || out.is_empty() {
        out.push(fixed(cursor, sup));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleSurvey {
    pub point: ExtPoint,
    pub side: Side,
    pub classification: GermClass,
    pub is_lower_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CombFiniteVerdict {
    Consistent { vacuous: bool },
    Violated { point: ExtPoint, side: Side, words: (Word, Word) },
}

#[derive(Debug, Clone, Serialize)]
pub struct CombFiniteReport {
    pub generators: usize,
    /// Holds for every element of a group of finite-piece maps.
    pub finite_support_components: bool,
    pub samples: Vec<SampleSurvey>,
    pub verdict: CombFiniteVerdict,
    pub caveats: Vec<String>,
}

/// Checks the three clauses of combinatorial finiteness that finite data
/// can speak to. Abelianness is tested on germ surveys at the samples, so
/// `Consistent` is only as strong as the survey depth.
pub fn comb_finite_report(spec: &GroupSpec, samples: &[ExtPoint], depth: usize) -> Result<CombFiniteReport> {
    let mut out = Vec::new();
    let mut caveats = vec![format!("germ groups surveyed up to word length {depth}")];
    let mut verdict = CombFiniteVerdict::Consistent {
        vacuous: samples.is_empty(),
    };
    for p in samples {
        let sides: &[Side] = if *p == spec.domain.inf() {
            &[Side::Right]
        } else if *p == spec.domain.sup() {
            &[Side::Left]
        } else {
            &[Side::Left, Side::Right]
        };
        for &side in sides {
            let report = germ_survey(spec, p, side, depth)?;
            if let GermClass::Unsupported { reason } = &report.classification {
                caveats.push(format!("{p} ({side}): {reason}"));
            }
            if let (Some((u, v)), CombFiniteVerdict::Consistent { .. }) = (report.witness_words(), &verdict) {
                verdict = CombFiniteVerdict::Violated {
                    point: p.clone(),
                    side,
                    words: (u.clone(), v.clone()),
                };
            }
            out.push(SampleSurvey {
                point: p.clone(),
                side,
                classification: report.classification,
                is_lower_bound: report.is_lower_bound,
            });
        }
    }
    Ok(CombFiniteReport {
        generators: spec.generators().len(),
        finite_support_components: true,
        samples: out,
        verdict,
        caveats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_str;
    use crate::rational::{int, rat};

    #[test]
    fn catalog_types() {
        let p = build_str("f-projective+c").unwrap();
        assert_eq!(classify_element(p.generator("a").unwrap()), ElementType::FullySupported);
        assert_eq!(classify_element(p.generator("b").unwrap()), ElementType::TypeB);
        assert_eq!(classify_element(p.generator("c").unwrap()), ElementType::CompactlySupported);
        let bs = build_str("broken-bs:2").unwrap();
        assert_eq!(classify_element(bs.generator("b+").unwrap()), ElementType::TypeA);
        assert_eq!(classify_element(bs.generator("b-").unwrap()), ElementType::TypeB);
        assert_eq!(classify_element(&bs.identity()), ElementType::Identity);
    }

    #[test]
    fn type_c_on_the_line() {
        // t ↦ 2t fixes only 0
        let bs = build_str("broken-bs:2").unwrap();
        let w = Word::parse("b+ b-").unwrap();
        let f = bs.evaluate(&w).unwrap();
        let zero = Point::Rational(int(0));
        assert_eq!(
            classify_element(&f),
            ElementType::TypeC {
                r: zero.clone(),
                s: zero
            }
        );
    }

    #[test]
    fn dyadic_generators_on_the_interval() {
        let d = build_str("f-dyadic").unwrap();
        // x0 moves every interior point; x1 fixes [0, 1/2]
        assert_eq!(classify_element(d.generator("x0").unwrap()), ElementType::FullySupported);
        assert_eq!(classify_element(d.generator("x1").unwrap()), ElementType::TypeB);
    }

    #[test]
    fn orbitals() {
        let d = build_str("f-dyadic").unwrap();
        let o = group_orbitals(&d);
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].kind, OrbitalKind::Orbital);
        let p = build_str("f-projective+c").unwrap();
        let c = GroupSpec::new(
            "c",
            p.domain.clone(),
            vec![p.generators()[2].clone()],
        )
        .unwrap();
        let o = group_orbitals(&c);
        let kinds: Vec<_> = o.iter().map(|x| x.kind).collect();
        assert_eq!(kinds, [OrbitalKind::Fixed, OrbitalKind::Orbital, OrbitalKind::Fixed]);
        assert_eq!(o[1].lo, Point::Rational(int(0)));
        assert_eq!(o[1].hi, Point::Rational(int(1)));
        let id = GroupSpec::new("id", p.domain.clone(), vec![]).unwrap();
        assert_eq!(group_orbitals(&id).len(), 1);
        assert_eq!(group_orbitals(&id)[0].kind, OrbitalKind::Fixed);
    }

    #[test]
    fn comb_finite_dyadic() {
        let d = build_str("f-dyadic").unwrap();
        let samples: Vec<ExtPoint> = [rat(1, 2), rat(1, 4), rat(3, 4)].into_iter().map(ExtPoint::Finite).collect();
        let r = comb_finite_report(&d, &samples, 5).unwrap();
        assert_eq!(r.verdict, CombFiniteVerdict::Consistent { vacuous: false });
        let r = comb_finite_report(&d, &[], 5).unwrap();
        assert_eq!(r.verdict, CombFiniteVerdict::Consistent { vacuous: true });
    }
}
