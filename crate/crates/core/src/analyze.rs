//! Coherence reports and non-embeddability verdicts.
//!
//! A verdict never asserts that an embedding exists: either an obstruction
//! is found, with evidence that can be replayed, or the answer is
//! inconclusive. Every piece of asserted metadata a verdict relies on is
//! listed among its assumptions.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::classify::{classify_element, group_orbitals, ElementType, OrbitalKind};
use crate::dynamics::{probe_in_window, probe_window, MinimalityProbe};
use crate::error::{Error, Result};
use crate::flmap::FracLinearMap;
use crate::germ::{germ_quotient_image, germ_survey, slope_group_rank, GermClass, GermGroupReport, Side};
use crate::interval::Interval;
use crate::point::{ExtPoint, Point};
use crate::rational::{int, Rational};
use crate::search::{find_word_satisfying, SearchBudget};
use crate::spec::GroupSpec;
use crate::word::Word;

/// Word length of end-germ surveys in coherence reports; orbit depths are
/// much larger than what exhaustive element enumeration can afford.
pub const GERM_DEPTH_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Minimality {
    EmpiricalPass {
        #[serde(serialize_with = "crate::rational::ser::one")]
        epsilon: Rational,
        depth: usize,
        #[serde(serialize_with = "crate::rational::ser::one")]
        worst_gap: Rational,
        window: Interval,
    },
    EmpiricalFail {
        #[serde(serialize_with = "crate::rational::ser::one")]
        worst_gap: Rational,
        #[serde(serialize_with = "crate::rational::ser::one")]
        start: Rational,
        window: Interval,
        stagnant: bool,
    },
    /// The probe failed but the spec asserts a coherent action.
    Asserted { note: String, probe: Box<Minimality> },
}

impl From<MinimalityProbe> for Minimality {
    fn from(p: MinimalityProbe) -> Self {
        match p {
            MinimalityProbe::EmpiricalPass {
                epsilon,
                depth,
                worst_gap,
                window,
            } => Minimality::EmpiricalPass {
                epsilon,
                depth,
                worst_gap,
                window,
            },
            MinimalityProbe::EmpiricalFail {
                worst_gap,
                start,
                window,
                stagnant,
            } => Minimality::EmpiricalFail {
                worst_gap,
                start,
                window,
                stagnant,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Solvability {
    Abelian,
    /// Nonabelian, but commutators of the shortest surveyed germs commute.
    MetabelianWitnessed,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndGerms {
    pub base: ExtPoint,
    pub side: Side,
    pub depth: usize,
    pub classification: GermClass,
    pub solvability: Solvability,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Overall {
    CoherentModuloMinimality,
    Incomplete { missing: Vec<String> },
}

#[derive(Debug, Clone, Serialize)]
pub struct CoherenceReport {
    pub minimality: Minimality,
    pub end_germ_solvability: Solvability,
    pub ends: Vec<EndGerms>,
    /// Trivial germ at the lower end, no fixed points near the upper end.
    pub type_b_witness: Option<Word>,
    /// Trivial germ at the upper end, no fixed points near the lower end.
    pub type_a_witness: Option<Word>,
    pub overall: Overall,
    pub assumptions: Vec<String>,
    pub notes: Vec<String>,
}

fn commutator(a: &FracLinearMap, b: &FracLinearMap) -> FracLinearMap {
    a.inverse().then(&b.inverse()).then(a).then(b)
}

/// Germs (shortest words first) whose commutators are tested for commuting.
const METABELIAN_SAMPLE: usize = 16;

fn solvability(report: &GermGroupReport) -> Solvability {
    match report.classification {
        GermClass::Trivial | GermClass::AbelianRank { .. } => Solvability::Abelian,
        GermClass::Nonabelian { .. } => {
            let reps: Vec<&FracLinearMap> = report.germs.iter().take(METABELIAN_SAMPLE).map(|g| &g.rep).collect();
            let mut commutators = Vec::new();
            for (i, a) in reps.iter().enumerate() {
                for b in &reps[i + 1..] {
                    commutators.push(commutator(a, b));
                }
            }
            let derived_abelian = commutators
                .iter()
                .enumerate()
                .all(|(i, c)| commutators[i + 1..].iter().all(|d| c.commutes_with(d)));
            if derived_abelian {
                Solvability::MetabelianWitnessed
            } else {
                Solvability::Unknown
            }
        }
        GermClass::Unsupported { .. } => Solvability::Unknown,
    }
}

/// Shortlex-least element with a trivial germ at exactly one end: the
/// lower end when `lower_trivial`, else the upper end.
pub fn find_ray_element(spec: &GroupSpec, budget: &SearchBudget, lower_trivial: bool) -> Result<Word> {
    find_word_satisfying(
        spec,
        |f| {
            let (lo, hi) = germ_quotient_image(f);
            lo.is_trivial() == lower_trivial && hi.is_trivial() != lower_trivial
        },
        budget,
    )
    .map(|f| f.word)
}

/// Starting points for orbit probes: fifths of the window.
fn probe_starts(window: &Interval) -> Vec<Rational> {
    (1..=3)
        .map(|k| &window.lo + window.length() * int(k) / int(5))
        .collect()
}

pub fn coherence_report(spec: &GroupSpec, depth: usize, epsilon: &Rational, budget: &SearchBudget) -> Result<CoherenceReport> {
    let mut assumptions = Vec::new();
    let mut notes = vec![format!(
        "minimality probe: orbit depth {depth}, gap threshold {epsilon} (calibration constants)"
    )];
    let mut missing = Vec::new();

    let window = probe_window(&Point::from(spec.domain.inf()), &Point::from(spec.domain.sup()))?;
    let probe: Minimality = probe_in_window(spec, &probe_starts(&window), depth, epsilon, window)?.into();
    let interior_fixed = group_orbitals(spec)
        .iter()
        .filter(|p| p.kind == OrbitalKind::Fixed)
        .any(|p| p.lo.cmp_ext(&spec.domain.inf()).is_gt() && p.hi.cmp_ext(&spec.domain.sup()).is_lt());
    if interior_fixed {
        notes.push("every generator fixes some interior point; the action is not minimal".into());
    }
    let minimality = match (&probe, &spec.metadata.coherent) {
        (Minimality::EmpiricalFail { .. }, Some(a)) if a.value && !interior_fixed => {
            assumptions.push(format!("coherent (asserted): {}", a.note));
            Minimality::Asserted {
                note: a.note.clone(),
                probe: Box::new(probe),
            }
        }
        (Minimality::EmpiricalFail { .. }, _) => {
            missing.push("minimality".to_string());
            probe
        }
        _ => {
            if interior_fixed {
                missing.push("minimality".to_string());
            }
            probe
        }
    };

    let germ_depth = depth.min(GERM_DEPTH_CAP);
    let mut ends = Vec::new();
    for (base, side) in [(spec.domain.inf(), Side::Right), (spec.domain.sup(), Side::Left)] {
        let report = germ_survey(spec, &base, side, germ_depth)?;
        ends.push(EndGerms {
            solvability: solvability(&report),
            base,
            side,
            depth: germ_depth,
            classification: report.classification,
        });
    }
    let end_germ_solvability = if ends.iter().all(|e| e.solvability == Solvability::Abelian) {
        Solvability::Abelian
    } else if ends.iter().any(|e| e.solvability == Solvability::Unknown) {
        missing.push("end germ solvability".into());
        Solvability::Unknown
    } else {
        notes.push("metabelian germ groups are witnessed on a finite survey only".into());
        Solvability::MetabelianWitnessed
    };

    let mut witness = |lower_trivial: bool, clause: &str| match find_ray_element(spec, budget, lower_trivial) {
        Ok(w) => Some(w),
        Err(e) => {
            missing.push(clause.to_string());
            notes.push(format!("{clause}: {e}"));
            None
        }
    };
    let type_b_witness = witness(true, "type B witness");
    let type_a_witness = witness(false, "type A witness");

    Ok(CoherenceReport {
        minimality,
        end_germ_solvability,
        ends,
        type_b_witness,
        type_a_witness,
        overall: if missing.is_empty() {
            Overall::CoherentModuloMinimality
        } else {
            Overall::Incomplete { missing }
        },
        assumptions,
        notes,
    })
}

impl CoherenceReport {
    /// Re-evaluates the ray witnesses and checks their types.
    pub fn witnesses_verify(&self, spec: &GroupSpec) -> Result<bool> {
        let ok = |w: &Option<Word>, want: ElementType| -> Result<bool> {
            Ok(match w {
                None => true,
                Some(w) => classify_element(&spec.evaluate(w)?) == want,
            })
        };
        Ok(ok(&self.type_b_witness, ElementType::TypeB)? && ok(&self.type_a_witness, ElementType::TypeA)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EmbeddingTarget {
    /// Thompson's group F.
    F,
    /// The Brown–Stein–Thompson group over the given primes.
    Stein { primes: Vec<u64> },
}

impl FromStr for EmbeddingTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("f") {
            return Ok(EmbeddingTarget::F);
        }
        let bad = || Error::InvalidKey(format!("target {s:?}; expected f or stein:p1,p2,..."));
        let list = s.strip_prefix("stein:").ok_or_else(bad)?;
        let mut primes: Vec<u64> = list.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        let is_prime = |p: u64| p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if primes.is_empty() || !primes.iter().all(|&p| is_prime(p)) {
            return Err(bad());
        }
        primes.sort_unstable();
        primes.dedup();
        Ok(EmbeddingTarget::Stein { primes })
    }
}

impl fmt::Display for EmbeddingTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbeddingTarget::F => f.write_str("f"),
            EmbeddingTarget::Stein { primes } => {
                let p: Vec<String> = primes.iter().map(u64::to_string).collect();
                write!(f, "stein:{}", p.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    GermRank,
    GermNonabelian,
    RankComparison,
    InfiniteSupportComponents,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Replay with `germ_survey(spec, base, side, depth)`.
    GermReport {
        base: ExtPoint,
        side: Side,
        depth: usize,
        report: GermGroupReport,
    },
    Ranks {
        source_rank: usize,
        target_rank: usize,
        basis: String,
    },
    Metadata { note: String },
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum VerdictTag {
    NotEmbeddable { criterion: Criterion, evidence: Evidence },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub target: EmbeddingTarget,
    #[serde(flatten)]
    pub tag: VerdictTag,
    pub assumptions: Vec<String>,
}

impl Verdict {
    pub fn is_not_embeddable(&self) -> bool {
        matches!(self.tag, VerdictTag::NotEmbeddable { .. })
    }

    pub fn criterion(&self) -> Option<Criterion> {
        match &self.tag {
            VerdictTag::NotEmbeddable { criterion, .. } => Some(*criterion),
            VerdictTag::Inconclusive { .. } => None,
        }
    }

    /// Re-derives the evidence and checks it supports the same criterion.
    pub fn replay(&self, spec: &GroupSpec) -> Result<bool> {
        let VerdictTag::NotEmbeddable { criterion, evidence } = &self.tag else {
            return Ok(true);
        };
        Ok(match evidence {
            Evidence::GermReport {
                base,
                side,
                depth,
                report,
            } => {
                let again = germ_survey(spec, base, *side, *depth)?;
                again.classification == report.classification && germ_criterion(&again) == Some(*criterion)
            }
            Evidence::Ranks {
                source_rank,
                target_rank,
                ..
            } => {
                let target = match &self.target {
                    EmbeddingTarget::Stein { primes } => primes.len(),
                    EmbeddingTarget::F => 1,
                };
                source_rank > target_rank
                    && *target_rank == target
                    && source_rank_of(spec)?.is_some_and(|(r, _)| r == *source_rank)
            }
            Evidence::Metadata { .. } => spec.metadata.infinite_support.is_some(),
        })
    }
}

fn germ_criterion(report: &GermGroupReport) -> Option<Criterion> {
    match report.classification {
        GermClass::Nonabelian { .. } => Some(Criterion::GermNonabelian),
        GermClass::AbelianRank { rank } if rank >= 2 => Some(Criterion::GermRank),
        _ => None,
    }
}

/// Domain ends and the rational breakpoints of the generators, with the
/// sides on which germs exist.
fn survey_sites(spec: &GroupSpec) -> Vec<(ExtPoint, Side)> {
    let mut sites = vec![(spec.domain.inf(), Side::Right), (spec.domain.sup(), Side::Left)];
    let mut points: Vec<Rational> = spec
        .generators()
        .iter()
        .flat_map(|g| g.map.breakpoints())
        .filter(|x| spec.domain.contains_interior(x))
        .collect();
    points.sort();
    points.dedup();
    for x in points {
        for side in [Side::Left, Side::Right] {
            sites.push((ExtPoint::Finite(x.clone()), side));
        }
    }
    sites
}

/// Germ rank of the source from its declared slope group.
fn source_rank_of(spec: &GroupSpec) -> Result<Option<(usize, String)>> {
    let m = &spec.metadata;
    if !m.declares_slope_group() {
        return Ok(None);
    }
    let slopes: Vec<Rational> = if m.slope_primes.is_empty() {
        m.slope_generators.clone()
    } else {
        m.slope_primes.iter().map(|&p| int(p as i64)).collect()
    };
    let shown: Vec<String> = slopes.iter().map(crate::rational::fmt_rational).collect();
    Ok(Some((slope_group_rank(&slopes)?, format!("declared slope group <{}>", shown.join(", ")))))
}

fn coherence_assumption(spec: &GroupSpec) -> String {
    match &spec.metadata.coherent {
        Some(a) if a.value => format!("coherent action (asserted: {})", a.note),
        _ => "coherent action (assumed, not asserted by the spec)".into(),
    }
}

/// Default word length of germ surveys behind verdicts.
pub const VERDICT_DEPTH: usize = 4;

pub fn embeddability_verdict(source: &GroupSpec, target: &EmbeddingTarget, depth: usize) -> Result<Verdict> {
    let mut assumptions = vec![coherence_assumption(source)];
    let verdict = |tag, assumptions| Verdict {
        target: target.clone(),
        tag,
        assumptions,
    };
    match target {
        EmbeddingTarget::F => {
            for (base, side) in survey_sites(source) {
                let report = germ_survey(source, &base, side, depth)?;
                if let Some(criterion) = germ_criterion(&report) {
                    if report.source == crate::germ::ReportSource::Metadata {
                        assumptions.push(format!("germ group at {base} from metadata: {}", report.basis_note));
                    }
                    return Ok(verdict(
                        VerdictTag::NotEmbeddable {
                            criterion,
                            evidence: Evidence::GermReport {
                                base,
                                side,
                                depth,
                                report,
                            },
                        },
                        assumptions,
                    ));
                }
            }
            if let Some(note) = &source.metadata.infinite_support {
                assumptions.push(format!(
                    "an element with infinitely many support components (asserted: {note}); not representable with finitely many pieces"
                ));
                return Ok(verdict(
                    VerdictTag::NotEmbeddable {
                        criterion: Criterion::InfiniteSupportComponents,
                        evidence: Evidence::Metadata { note: note.clone() },
                    },
                    assumptions,
                ));
            }
            Ok(verdict(
                VerdictTag::Inconclusive {
                    reason: format!(
                        "germ groups at the domain ends and generator breakpoints are abelian of rank at most 1 up to word length {depth}"
                    ),
                },
                assumptions,
            ))
        }
        EmbeddingTarget::Stein { primes } => {
            let target_rank = primes.len();
            assumptions.push(
                "rank comparison reads the source germ rank from its declared slope group; \
                 abstract isomorphic actions are not quantified over"
                    .into(),
            );
            match source_rank_of(source)? {
                Some((source_rank, basis)) if source_rank > target_rank => {
                    assumptions.push(format!("{basis} (metadata)"));
                    Ok(verdict(
                        VerdictTag::NotEmbeddable {
                            criterion: Criterion::RankComparison,
                            evidence: Evidence::Ranks {
                                source_rank,
                                target_rank,
                                basis,
                            },
                        },
                        assumptions,
                    ))
                }
                Some((source_rank, _)) => Ok(verdict(
                    VerdictTag::Inconclusive {
                        reason: format!("source rank {source_rank} does not exceed target rank {target_rank}"),
                    },
                    assumptions,
                )),
                None => Ok(verdict(
                    VerdictTag::Inconclusive {
                        reason: "source declares no slope group".into(),
                    },
                    assumptions,
                )),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_str;
    use crate::rational::rat;
    use crate::spec::Generator;

    #[test]
    fn targets_parse() {
        assert_eq!("f".parse::<EmbeddingTarget>().unwrap(), EmbeddingTarget::F);
        assert_eq!(
            "stein:3,2".parse::<EmbeddingTarget>().unwrap(),
            EmbeddingTarget::Stein { primes: vec![2, 3] }
        );
        assert!("stein:4".parse::<EmbeddingTarget>().is_err());
        assert!("g".parse::<EmbeddingTarget>().is_err());
    }

    #[test]
    fn catalog_verdicts() {
        let s23 = build_str("stein:2,3").unwrap();
        let v = embeddability_verdict(&s23, &EmbeddingTarget::F, VERDICT_DEPTH).unwrap();
        assert_eq!(v.criterion(), Some(Criterion::GermRank));
        assert!(v.replay(&s23).unwrap());
        let s235 = build_str("stein:2,3,5").unwrap();
        let v = embeddability_verdict(&s235, &"stein:2,3".parse().unwrap(), VERDICT_DEPTH).unwrap();
        assert_eq!(v.criterion(), Some(Criterion::RankComparison));
        assert!(v.replay(&s235).unwrap());
        let d = build_str("f-dyadic").unwrap();
        let v = embeddability_verdict(&d, &EmbeddingTarget::F, VERDICT_DEPTH).unwrap();
        assert!(!v.is_not_embeddable());
        let bs = build_str("broken-bs:2").unwrap();
        let v = embeddability_verdict(&bs, &EmbeddingTarget::F, VERDICT_DEPTH).unwrap();
        assert_eq!(v.criterion(), Some(Criterion::GermNonabelian));
        assert!(v.replay(&bs).unwrap());
    }

    #[test]
    fn dyadic_coherence() {
        let d = build_str("f-dyadic").unwrap();
        let r = coherence_report(&d, 12, &rat(1, 64), &SearchBudget::default()).unwrap();
        assert_eq!(r.overall, Overall::CoherentModuloMinimality);
        assert!(matches!(r.minimality, Minimality::EmpiricalPass { .. }));
        assert_eq!(r.type_b_witness.as_ref().unwrap().to_string(), "x1");
        assert!(r.witnesses_verify(&d).unwrap());
    }

    #[test]
    fn broken_bs_coherence() {
        let bs = build_str("broken-bs:2").unwrap();
        let r = coherence_report(&bs, 8, &rat(1, 64), &SearchBudget::default()).unwrap();
        assert_eq!(r.overall, Overall::CoherentModuloMinimality);
        assert_eq!(r.end_germ_solvability, Solvability::MetabelianWitnessed);
    }

    #[test]
    fn single_bump_is_incomplete() {
        let p = build_str("f-projective+c").unwrap();
        let c: Vec<Generator> = vec![p.generators()[2].clone()];
        let bump = GroupSpec::new("c", p.domain.clone(), c).unwrap();
        let r = coherence_report(&bump, 6, &rat(1, 64), &SearchBudget::new(10_000, 8).unwrap()).unwrap();
        match r.overall {
            Overall::Incomplete { missing } => {
                assert!(missing.contains(&"type B witness".to_string()));
                assert!(missing.contains(&"type A witness".to_string()));
            }
            other => panic!("{other:?}"),
        }
    }
}
