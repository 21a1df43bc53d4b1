//! Certificates realizing the constructive lemmas: transport of points and
//! intervals, local minimality, Higman disjointness, fully supported
//! elements and subgroups isomorphic to Thompson's group F.
//!
//! Each construction follows its proof recipe first and falls back to plain
//! search when a step fails; the result records which path produced it.
//! Every witness is verified exactly before it is returned and can be
//! replayed later from its words alone.

mod fsub;
pub mod relations;
mod transport;

use std::cell::OnceCell;

use serde::Serialize;

use crate::classify::{group_orbitals, interior_fixed, OrbitalKind};
use crate::error::{Error, Result};
use crate::germ::germ_quotient_image;
use crate::interval::Interval;
use crate::pmap::{FixedComponent, PiecewiseMap};
use crate::point::Point;
use crate::rational::{fmt_rational, Rational};
use crate::search::{find_word_mapping, find_word_satisfying, SearchBudget};
use crate::spec::GroupSpec;
use crate::word::Word;

pub use fsub::{f_subgroup_certificate, FCertificate, NonCommutingPoint};
pub use relations::{check_f_relations, find_f_assignment, RelationCheck};
pub use transport::{
    fix_and_push_witness, fully_supported_witness, higman_witness, interval_into_witness,
    local_minimality_witness, move_point_witness, pair_transport_witness, push_with_anchor_witness,
    FullySupportedWitness, HigmanWitness, LocalMinWitness,
};

/// How a witness was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// The requirement already held; the word is empty.
    Trivial,
    /// Assembled following the proof of the lemma.
    Recipe,
    /// Found by shortlex search.
    Search,
}

/// What an image must satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// Contained in the closed interval.
    Within { interval: Interval },
    /// Strictly above the value.
    Above {
        #[serde(serialize_with = "crate::rational::ser::one")]
        value: Rational,
    },
    /// The element is the identity on the input.
    FixedPointwise,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageCheck {
    pub input: Interval,
    pub image: Interval,
    pub target: Target,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransportWitness {
    pub lemma: &'static str,
    pub word: Word,
    pub compactly_supported: bool,
    pub verified_images: Vec<ImageCheck>,
    pub provenance: Provenance,
    /// Words of the intermediate elements of the recipe, by role.
    pub steps: Vec<(String, Word)>,
}

fn fixes_pointwise(f: &PiecewiseMap, i: &Interval) -> bool {
    if i.is_degenerate() {
        return f.fixes(&i.lo);
    }
    f.fixed_set().iter().any(|c| match c {
        FixedComponent::Interval(lo, hi) => lo.cmp_rational(&i.lo).is_le() && hi.cmp_rational(&i.hi).is_ge(),
        FixedComponent::Point(_) => false,
    })
}

fn target_holds(f: &PiecewiseMap, input: &Interval, image: &Interval, target: &Target) -> bool {
    match target {
        Target::Within { interval } => image.is_subset_of(interval),
        Target::Above { value } => image.lo > *value,
        Target::FixedPointwise => fixes_pointwise(f, input),
    }
}

pub(crate) fn is_compact(f: &PiecewiseMap) -> bool {
    let (lo, hi) = germ_quotient_image(f);
    lo.is_trivial() && hi.is_trivial()
}

/// Recomputes the images of `f` and checks every target.
pub(crate) fn check_images(f: &PiecewiseMap, wanted: &[(Interval, Target)]) -> Result<Option<Vec<ImageCheck>>> {
    let mut out = Vec::new();
    for (input, target) in wanted {
        let image = input.image(f)?;
        if !target_holds(f, input, &image, target) {
            return Ok(None);
        }
        out.push(ImageCheck {
            input: input.clone(),
            image,
            target: target.clone(),
        });
    }
    Ok(Some(out))
}

impl TransportWitness {
    /// Re-evaluates the word and re-checks every recorded image.
    pub fn replay(&self, spec: &GroupSpec) -> Result<bool> {
        let g = spec.evaluate(&self.word)?;
        if self.compactly_supported && !is_compact(&g) {
            return Ok(false);
        }
        let wanted: Vec<(Interval, Target)> = self
            .verified_images
            .iter()
            .map(|c| (c.input.clone(), c.target.clone()))
            .collect();
        Ok(match check_images(&g, &wanted)? {
            Some(checks) => checks == self.verified_images,
            None => false,
        })
    }
}

/// An element together with a word for it.
#[derive(Debug, Clone)]
pub(crate) struct Elt {
    pub word: Word,
    pub map: PiecewiseMap,
}

impl Elt {
    pub fn identity(spec: &GroupSpec) -> Self {
        Elt {
            word: Word::empty(),
            map: spec.identity(),
        }
    }

    pub fn of(spec: &GroupSpec, word: Word) -> Result<Self> {
        Ok(Elt {
            map: spec.evaluate(&word)?,
            word,
        })
    }

    pub fn then(&self, other: &Elt) -> Elt {
        Elt {
            word: self.word.then(&other.word),
            map: self.map.compose(&other.map).expect("shared domain"),
        }
    }

    pub fn inverse(&self) -> Elt {
        Elt {
            word: self.word.inverse(),
            map: self.map.inverse(),
        }
    }

    pub fn pow(&self, n: i64) -> Elt {
        Elt {
            word: self.word.pow(n),
            map: self.map.pow(n),
        }
    }

    /// `k⁻¹ self k`.
    pub fn conj(&self, k: &Elt) -> Elt {
        k.inverse().then(self).then(k)
    }

    pub fn commutator(&self, other: &Elt) -> Elt {
        self.inverse().then(&other.inverse()).then(self).then(other)
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        self.map.apply(x).expect("point in domain")
    }
}

/// Most iterations tried when powering an element towards a target.
pub(crate) const MAX_ITERATIONS: usize = 100_000;

/// Least `n ≥ 1` with `pred(x·fⁿ)`, with the image.
pub(crate) fn iterate_until(
    f: &PiecewiseMap,
    x: &Rational,
    mut pred: impl FnMut(&Rational) -> bool,
) -> Option<(i64, Rational)> {
    let mut y = x.clone();
    for n in 1..=MAX_ITERATIONS {
        y = f.apply(&y)?;
        if pred(&y) {
            return Some((n as i64, y));
        }
    }
    None
}

/// Rational bracket `(lo, hi)` of a finite point; equal for rationals.
pub(crate) fn bracket(p: &Point) -> Result<(Rational, Rational)> {
    match (p.rational_below(), p.rational_above()) {
        (Some(l), Some(h)) => Ok((l, h)),
        _ => Err(Error::IrrationalPoint(format!("{p} is not finite"))),
    }
}

/// The open orbital containing all the points, as `(lo, hi)`.
pub(crate) fn common_orbital(spec: &GroupSpec, points: &[Rational]) -> Result<(Point, Point)> {
    let orbitals: Vec<(Point, Point)> = group_orbitals(spec)
        .into_iter()
        .filter(|p| p.kind == OrbitalKind::Orbital)
        .map(|p| (p.lo, p.hi))
        .collect();
    let inside = |o: &(Point, Point), x: &Rational| o.0.cmp_rational(x).is_lt() && o.1.cmp_rational(x).is_gt();
    let first = points.first().ok_or_else(|| Error::precondition("no points given"))?;
    let o = orbitals
        .iter()
        .find(|o| inside(o, first))
        .ok_or_else(|| Error::precondition(format!("{} is not inside an orbital", fmt_rational(first))))?;
    for x in points {
        if !inside(o, x) {
            return Err(Error::precondition(format!(
                "{} and {} are not in one orbital",
                fmt_rational(first),
                fmt_rational(x)
            )));
        }
    }
    Ok(o.clone())
}

/// Shared search state of one witness construction: the spec, the budget
/// applied to each search, and lazily found auxiliary elements.
pub(crate) struct Kit<'a> {
    pub spec: &'a GroupSpec,
    pub budget: SearchBudget,
    seed: OnceCell<Elt>,
    ray_up: OnceCell<Elt>,
    ray_down: OnceCell<Elt>,
}

impl<'a> Kit<'a> {
    pub fn new(spec: &'a GroupSpec, budget: &SearchBudget) -> Self {
        Kit {
            spec,
            budget: *budget,
            seed: OnceCell::new(),
            ray_up: OnceCell::new(),
            ray_down: OnceCell::new(),
        }
    }

    pub fn elt(&self, word: Word) -> Result<Elt> {
        Elt::of(self.spec, word)
    }

    /// A nontrivial compactly supported element: a short search, then
    /// iterated commutators of the generators, then the full search.
    pub fn compact_seed(&self) -> Result<&Elt> {
        if let Some(e) = self.seed.get() {
            return Ok(e);
        }
        let good = |f: &PiecewiseMap| !f.is_identity() && is_compact(f);
        let short = SearchBudget {
            max_nodes: self.budget.max_nodes.min(4000),
            max_length: self.budget.max_length.min(6),
        };
        let found = match find_word_satisfying(self.spec, good, &short) {
            Ok(f) => Some(self.elt(f.word)?),
            Err(e) if e.is_budget_exhausted() => self.commutator_seed(),
            Err(e) => return Err(e),
        };
        let seed = match found {
            Some(s) => s,
            None => self.elt(find_word_satisfying(self.spec, good, &self.budget)?.word)?,
        };
        Ok(self.seed.get_or_init(|| seed))
    }

    fn commutator_seed(&self) -> Option<Elt> {
        let mut level: Vec<Elt> = self
            .spec
            .generators()
            .iter()
            .map(|g| Elt {
                word: Word::gen(g.name.clone()),
                map: g.map.clone(),
            })
            .collect();
        for _ in 0..3 {
            let mut next: Vec<Elt> = Vec::new();
            for i in 0..level.len() {
                for j in i + 1..level.len() {
                    let c = level[i].commutator(&level[j]);
                    if c.map.is_identity() || next.iter().any(|e| e.map == c.map) {
                        continue;
                    }
                    if is_compact(&c.map) {
                        return Some(c);
                    }
                    next.push(c);
                }
            }
            // keep the mix of old and new elements small
            next.truncate(12);
            level.extend(next);
            level.truncate(16);
        }
        None
    }

    /// An element with trivial germ at the lower end that increases on its
    /// last component of support `(r, sup)`.
    pub fn ray_up(&self) -> Result<&Elt> {
        if let Some(e) = self.ray_up.get() {
            return Ok(e);
        }
        let f = find_word_satisfying(
            self.spec,
            |f| {
                let (lo, hi) = germ_quotient_image(f);
                lo.is_trivial() && !hi.is_trivial()
            },
            &self.budget,
        )?;
        let mut e = self.elt(f.word)?;
        let last = e.map.support_components().pop().expect("nontrivial");
        let x = last.sample();
        if e.apply(&x) < x {
            e = e.inverse();
        }
        Ok(self.ray_up.get_or_init(|| e))
    }

    /// Mirror of [`Kit::ray_up`]: trivial germ at the upper end, increasing
    /// on its first component of support `(inf, r)`.
    pub fn ray_down(&self) -> Result<&Elt> {
        if let Some(e) = self.ray_down.get() {
            return Ok(e);
        }
        let f = find_word_satisfying(
            self.spec,
            |f| {
                let (lo, hi) = germ_quotient_image(f);
                !lo.is_trivial() && hi.is_trivial()
            },
            &self.budget,
        )?;
        let mut e = self.elt(f.word)?;
        let first = e.map.support_components().remove(0);
        let x = first.sample();
        if e.apply(&x) < x {
            e = e.inverse();
        }
        Ok(self.ray_down.get_or_init(|| e))
    }

    /// Shortlex-least word sending every point into the open interval.
    pub fn send_into(&self, points: &[Rational], lo: &Point, hi: &Point) -> Result<Elt> {
        let found = find_word_mapping(
            self.spec,
            points,
            |ys| ys.iter().all(|y| lo.cmp_rational(y).is_lt() && hi.cmp_rational(y).is_gt()),
            &self.budget,
        )?;
        self.elt(found.word)
    }
}

/// Interior fixed points of `f`, lowest and highest.
pub(crate) fn extreme_fixed_points(f: &PiecewiseMap) -> Option<(Point, Point)> {
    let fixed = interior_fixed(f);
    Some((fixed.first()?.lo().clone(), fixed.last()?.hi().clone()))
}
