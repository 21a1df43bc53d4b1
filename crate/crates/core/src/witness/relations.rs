//! The two-relator presentation of Thompson's group F used for
//! certificates: `[(ab)⁻¹ b (ab), a]` and `[(ab)⁻² b (ab)², a]`.
//!
//! With `A = ab` and `B = b` these are the classical relators
//! `[AB⁻¹, A⁻¹BA]` and `[AB⁻¹, A⁻²BA²]`.

use serde::Serialize;

use crate::error::Result;
use crate::pmap::PiecewiseMap;
use crate::rational::Rational;
use crate::spec::GroupSpec;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RelationCheck {
    /// Both relators are the identity. `abelian` flags the degenerate case
    /// where `a` and `b` commute, which certifies nothing about F.
    Holds { abelian: bool },
    /// Relator `relator` (0 or 1) moves `point`.
    Fails {
        relator: usize,
        #[serde(serialize_with = "crate::rational::ser::one")]
        point: Rational,
    },
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        matches!(self, RelationCheck::Holds { .. })
    }

    /// Relators hold and the pair does not commute.
    pub fn certifies(&self) -> bool {
        matches!(self, RelationCheck::Holds { abelian: false })
    }
}

pub fn relator_words(a: &Word, b: &Word) -> [Word; 2] {
    let ab = a.then(b);
    [
        Word::commutator(&b.conjugate_by(&ab), a),
        Word::commutator(&b.conjugate_by(&ab.pow(2)), a),
    ]
}

pub fn relator_elements(a: &PiecewiseMap, b: &PiecewiseMap) -> Result<[PiecewiseMap; 2]> {
    let ab = a.compose(b)?;
    Ok([
        b.conjugate_by(&ab)?.commutator(a)?,
        b.conjugate_by(&ab.pow(2))?.commutator(a)?,
    ])
}

pub fn check_f_relations(a: &PiecewiseMap, b: &PiecewiseMap) -> Result<RelationCheck> {
    for (i, r) in relator_elements(a, b)?.iter().enumerate() {
        if let Some(comp) = r.support_components().first() {
            return Ok(RelationCheck::Fails {
                relator: i,
                point: comp.sample(),
            });
        }
    }
    Ok(RelationCheck::Holds {
        abelian: a.commutes_with(b)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AssignmentResult {
    pub a: Word,
    pub b: Word,
    pub check: RelationCheck,
}

/// Ordered pairs of single letters on distinct generators, in generator
/// order with positive exponents first. Two generators give 8 pairs.
pub fn single_letter_assignments(spec: &GroupSpec) -> Vec<(Word, Word)> {
    let letters: Vec<(usize, Word)> = spec
        .generators()
        .iter()
        .enumerate()
        .flat_map(|(i, g)| [1, -1].map(|e| (i, Word::power_of(g.name.clone(), e))))
        .collect();
    let mut out = Vec::new();
    for (i, a) in &letters {
        for (j, b) in &letters {
            if i != j {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Ordered pairs of distinct nonempty reduced words of length at most
/// `max_len`, shortlex in each coordinate.
pub fn word_assignments(spec: &GroupSpec, max_len: usize) -> Vec<(Word, Word)> {
    let mut words = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in spec.generators() {
                for e in [1, -1] {
                    let last = w.letters().last();
                    if last.is_some_and(|l| l.name == g.name && l.exp.signum() != e) {
                        continue;
                    }
                    let mut letters = w.letters().to_vec();
                    letters.push(Letter {
                        name: g.name.clone(),
                        exp: e,
                    });
                    next.push(Word::from_letters(letters));
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    words.retain(|w| !w.is_empty());
    let mut out = Vec::new();
    for a in &words {
        for b in &words {
            if a != b {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Checks each assignment in order; all results are returned so callers can
/// report the full table.
pub fn check_assignments(spec: &GroupSpec, pairs: &[(Word, Word)]) -> Result<Vec<AssignmentResult>> {
    pairs
        .iter()
        .map(|(a, b)| {
            let check = check_f_relations(&spec.evaluate(a)?, &spec.evaluate(b)?)?;
            Ok(AssignmentResult {
                a: a.clone(),
                b: b.clone(),
                check,
            })
        })
        .collect()
}

/// First certifying assignment: single letters first, then words up to
/// length `max_len`.
pub fn find_f_assignment(spec: &GroupSpec, max_len: usize) -> Result<Option<AssignmentResult>> {
    for r in check_assignments(spec, &single_letter_assignments(spec))? {
        if r.check.certifies() {
            return Ok(Some(r));
        }
    }
    for len in 2..=max_len {
        for (a, b) in word_assignments(spec, len) {
            if a.len().max(b.len()) < len {
                continue;
            }
            let check = check_f_relations(&spec.evaluate(&a)?, &spec.evaluate(&b)?)?;
            if check.certifies() {
                return Ok(Some(AssignmentResult { a, b, check }));
            }
        }
    }
    Ok(None)
}
