//! Transport of points and intervals by group elements, local minimality,
//! Higman disjointness and fully supported elements.

use serde::Serialize;

use super::{
    bracket, check_images, common_orbital, is_compact, iterate_until, Elt, Kit, Provenance, Target,
    TransportWitness,
};
use crate::classify::interior_fixed;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::pmap::{OpenInterval, PiecewiseMap};
use crate::point::Point;
use crate::rational::{fmt_rational, int, midpoint, Rational};
use crate::search::{find_word_satisfying, SearchBudget};
use crate::spec::GroupSpec;
use crate::word::Word;

type Steps = Vec<(String, Word)>;

/// Runs the recipe; when it fails or yields an element violating `ok`,
/// searches for the shortlex-least element satisfying `ok` instead.
fn recipe_or_search(
    kit: &Kit,
    steps: &mut Steps,
    recipe: impl FnOnce(&mut Steps) -> Result<Elt>,
    ok: impl Fn(&PiecewiseMap) -> bool,
) -> Result<(Elt, Provenance)> {
    if let Ok(e) = recipe(steps) {
        if ok(&e.map) {
            return Ok((e, Provenance::Recipe));
        }
    }
    steps.clear();
    let found = find_word_satisfying(kit.spec, ok, &kit.budget)?;
    Ok((kit.elt(found.word)?, Provenance::Search))
}

fn image_within(f: &PiecewiseMap, u: &Interval, v: &Interval) -> bool {
    matches!(u.image(f), Ok(i) if i.is_subset_of(v))
}

fn finish(
    lemma: &'static str,
    elt: Elt,
    provenance: Provenance,
    steps: Steps,
    compact: bool,
    wanted: &[(Interval, Target)],
) -> Result<TransportWitness> {
    if compact && !is_compact(&elt.map) {
        return Err(Error::Internal(format!("{lemma}: element is not compactly supported")));
    }
    let verified_images =
        check_images(&elt.map, wanted)?.ok_or_else(|| Error::Internal(format!("{lemma}: witness fails its check")))?;
    Ok(TransportWitness {
        lemma,
        word: elt.word,
        compactly_supported: compact,
        verified_images,
        provenance,
        steps,
    })
}

fn trivial(spec: &GroupSpec, lemma: &'static str, compact: bool, wanted: &[(Interval, Target)]) -> Result<TransportWitness> {
    finish(lemma, Elt::identity(spec), Provenance::Trivial, Vec::new(), compact, wanted)
}

fn require_orbital(spec: &GroupSpec, intervals: &[&Interval]) -> Result<(Point, Point)> {
    let points: Vec<Rational> = intervals.iter().flat_map(|i| [i.lo.clone(), i.hi.clone()]).collect();
    common_orbital(spec, &points)
}

fn require_proper(i: &Interval, what: &str) -> Result<()> {
    if i.is_degenerate() {
        return Err(Error::precondition(format!("{what} {i} is degenerate")));
    }
    Ok(())
}

fn require_ordered(u: &Interval, v: &Interval) -> Result<()> {
    if u.hi >= v.lo {
        return Err(Error::precondition(format!("{u} does not lie below {v}")));
    }
    Ok(())
}

/// A compactly supported element moving `r1` strictly above `r2`, for
/// `r1 ≤ r2` in one orbital.
fn move_above(kit: &Kit, r1: &Rational, r2: &Rational, steps: &mut Steps) -> Result<(Elt, Provenance)> {
    recipe_or_search(
        kit,
        steps,
        |steps| {
            // conjugate both points into one component of a compact seed and
            // push with the seed
            let orbital = common_orbital(kit.spec, std::slice::from_ref(r1))?;
            let seed = kit.compact_seed()?;
            let comp = seed
                .map
                .support_components()
                .into_iter()
                .find(|c| c.lo >= orbital.0 && c.hi <= orbital.1)
                .ok_or_else(|| Error::precondition("seed misses the orbital"))?;
            let k = kit.send_into(&[r1.clone(), r2.clone()], &comp.lo, &comp.hi)?;
            let x = comp.sample();
            let e = if seed.apply(&x) < x { seed.inverse() } else { seed.clone() };
            let (a, b) = (k.apply(r1), k.apply(r2));
            let (n, _) = iterate_until(&e.map, &a, |y| *y > b).ok_or_else(|| Error::precondition("seed stalls"))?;
            steps.push(("seed".into(), e.word.clone()));
            steps.push(("conjugator".into(), k.word.clone()));
            Ok(k.then(&e.pow(n)).then(&k.inverse()))
        },
        |f| is_compact(f) && matches!(f.apply(r1), Some(y) if y > *r2),
    )
}

/// A compactly supported element mapping `u` into `v`.
fn interval_into(kit: &Kit, u: &Interval, v: &Interval, steps: &mut Steps) -> Result<(Elt, Provenance)> {
    if u.is_subset_of(v) {
        return Ok((Elt::identity(kit.spec), Provenance::Trivial));
    }
    recipe_or_search(
        kit,
        steps,
        |steps| {
            // a ray element conjugated so its last component starts inside v
            let ray = kit.ray_up()?;
            let last = ray.map.support_components().pop().expect("ray is nontrivial");
            let (b_lo, b_hi) = bracket(&last.lo)?;
            let into_v = kit.send_into(&[b_lo, b_hi.clone()], &Point::Rational(v.lo.clone()), &Point::Rational(v.hi.clone()))?;
            let ray = ray.conj(&into_v);
            // lift u above the start of that component
            let start = into_v.apply(&b_hi);
            let lift = if u.lo > start {
                Elt::identity(kit.spec)
            } else {
                move_above(kit, &u.lo, &start, &mut Vec::new())?.0
            };
            let lifted = u.image(&lift.map)?;
            // pulling back with the ray brings the top of u below sup v
            let back = ray.inverse();
            let (n, _) = iterate_until(&back.map, &lifted.hi, |y| *y < v.hi)
                .ok_or_else(|| Error::precondition("ray stalls"))?;
            // truncate the ray above u with a commutator so the result is compact
            let s0 = ray.map.support_components().remove(0).lo;
            let (s_lo, _) = bracket(&s0)?;
            let shift = if s_lo > lifted.hi {
                Elt::identity(kit.spec)
            } else {
                move_above(kit, &s_lo, &lifted.hi, &mut Vec::new())?.0
            };
            let truncated = ray.then(&shift.inverse()).then(&ray.inverse()).then(&shift);
            steps.push(("ray".into(), ray.word.clone()));
            steps.push(("lift".into(), lift.word.clone()));
            steps.push(("truncation".into(), shift.word.clone()));
            Ok(lift.then(&truncated.pow(-n)))
        },
        |f| is_compact(f) && image_within(f, u, v),
    )
}

/// An element fixing `u` pointwise and moving `v` above `r`.
fn fix_push(kit: &Kit, u: &Interval, v: &Interval, r: &Rational, steps: &mut Steps) -> Result<(Elt, Provenance)> {
    if *r < v.lo {
        return Ok((Elt::identity(kit.spec), Provenance::Trivial));
    }
    let gap = Interval::new(u.hi.clone(), v.lo.clone())?.core();
    recipe_or_search(
        kit,
        steps,
        |steps| {
            // conjugate a ray element so its support starts in the gap
            let ray = kit.ray_up()?;
            let comps = ray.map.support_components();
            let (s_lo, _) = bracket(&comps[0].lo)?;
            let (_, b_hi) = bracket(&comps[comps.len() - 1].lo)?;
            let into_gap = interval_into(kit, &Interval::new(s_lo, b_hi)?, &gap, &mut Vec::new())?.0;
            let ray = ray.conj(&into_gap);
            let (n, _) = iterate_until(&ray.map, &v.lo, |y| y > r).ok_or_else(|| Error::precondition("ray stalls"))?;
            steps.push(("ray".into(), ray.word.clone()));
            Ok(ray.pow(n))
        },
        |f| super::fixes_pointwise(f, u) && matches!(f.apply(&v.lo), Some(y) if y > *r),
    )
}

/// An element mapping `u` into `w` and `v` above `r`.
fn push_anchor(
    kit: &Kit,
    u: &Interval,
    v: &Interval,
    w: &Interval,
    r: &Rational,
    steps: &mut Steps,
) -> Result<(Elt, Provenance)> {
    if u.is_subset_of(w) && *r < v.lo {
        return Ok((Elt::identity(kit.spec), Provenance::Trivial));
    }
    recipe_or_search(
        kit,
        steps,
        |steps| {
            let into = interval_into(kit, u, w, &mut Vec::new())?.0;
            let pulled = into.inverse().apply(r);
            let push = fix_push(kit, u, v, &pulled, &mut Vec::new())?.0;
            steps.push(("push".into(), push.word.clone()));
            steps.push(("interval_into".into(), into.word.clone()));
            Ok(push.then(&into))
        },
        |f| image_within(f, u, w) && matches!(f.apply(&v.lo), Some(y) if y > *r),
    )
}

/// An element mapping `u1` into `v1` and `u2` into `v2`.
fn pair_transport(
    kit: &Kit,
    (u1, u2): (&Interval, &Interval),
    (v1, v2): (&Interval, &Interval),
    steps: &mut Steps,
) -> Result<(Elt, Provenance)> {
    if u1.is_subset_of(v1) && u2.is_subset_of(v2) {
        return Ok((Elt::identity(kit.spec), Provenance::Trivial));
    }
    recipe_or_search(
        kit,
        steps,
        |steps| {
            // first stage: u1 into v1, u2 beyond v2
            let first = push_anchor(kit, u1, u2, v1, &v2.hi, &mut Vec::new())?.0;
            let above = u2.image(&first.map)?;
            // second stage: a ray supported above v1 pulls u2 back into v2
            let ray = kit.ray_up()?;
            let comps = ray.map.support_components();
            let (s_lo, _) = bracket(&comps[0].lo)?;
            let (_, b_hi) = bracket(&comps[comps.len() - 1].lo)?;
            let into = interval_into(kit, &Interval::new(s_lo, b_hi)?, &v2.core(), &mut Vec::new())?.0;
            let back = ray.conj(&into).inverse();
            let (n, _) = iterate_until(&back.map, &above.hi, |y| *y <= v2.hi)
                .ok_or_else(|| Error::precondition("ray stalls"))?;
            steps.push(("first_stage".into(), first.word.clone()));
            steps.push(("pull_back".into(), back.word.clone()));
            Ok(first.then(&back.pow(n)))
        },
        |f| image_within(f, u1, v1) && image_within(f, u2, v2),
    )
}

pub fn move_point_witness(spec: &GroupSpec, r1: &Rational, r2: &Rational, budget: &SearchBudget) -> Result<TransportWitness> {
    if r1 >= r2 {
        return Err(Error::precondition(format!(
            "need r1 < r2, got {} and {}",
            fmt_rational(r1),
            fmt_rational(r2)
        )));
    }
    common_orbital(spec, &[r1.clone(), r2.clone()])?;
    let kit = Kit::new(spec, budget);
    let mut steps = Vec::new();
    let (e, prov) = move_above(&kit, r1, r2, &mut steps)?;
    let wanted = [(Interval::point(r1.clone()), Target::Above { value: r2.clone() })];
    finish("move_point", e, prov, steps, true, &wanted)
}

pub fn interval_into_witness(spec: &GroupSpec, u: &Interval, v: &Interval, budget: &SearchBudget) -> Result<TransportWitness> {
    require_proper(v, "target")?;
    require_orbital(spec, &[u, v])?;
    let wanted = [(u.clone(), Target::Within { interval: v.clone() })];
    if u.is_subset_of(v) {
        return trivial(spec, "interval_into", true, &wanted);
    }
    let kit = Kit::new(spec, budget);
    let mut steps = Vec::new();
    let (e, prov) = interval_into(&kit, u, v, &mut steps)?;
    finish("interval_into", e, prov, steps, true, &wanted)
}

pub fn fix_and_push_witness(
    spec: &GroupSpec,
    u: &Interval,
    v: &Interval,
    r: &Rational,
    budget: &SearchBudget,
) -> Result<TransportWitness> {
    require_ordered(u, v)?;
    require_orbital(spec, &[u, v, &Interval::point(r.clone())])?;
    let wanted = [
        (u.clone(), Target::FixedPointwise),
        (v.clone(), Target::Above { value: r.clone() }),
    ];
    let kit = Kit::new(spec, budget);
    let mut steps = Vec::new();
    let (e, prov) = fix_push(&kit, u, v, r, &mut steps)?;
    finish("fix_push", e, prov, steps, false, &wanted)
}

pub fn push_with_anchor_witness(
    spec: &GroupSpec,
    u: &Interval,
    v: &Interval,
    w: &Interval,
    r: &Rational,
    budget: &SearchBudget,
) -> Result<TransportWitness> {
    require_ordered(u, v)?;
    require_proper(w, "anchor")?;
    require_orbital(spec, &[u, v, w, &Interval::point(r.clone())])?;
    let wanted = [
        (u.clone(), Target::Within { interval: w.clone() }),
        (v.clone(), Target::Above { value: r.clone() }),
    ];
    let kit = Kit::new(spec, budget);
    let mut steps = Vec::new();
    let (e, prov) = push_anchor(&kit, u, v, w, r, &mut steps)?;
    finish("push_anchor", e, prov, steps, false, &wanted)
}

pub fn pair_transport_witness(
    spec: &GroupSpec,
    u1: &Interval,
    u2: &Interval,
    v1: &Interval,
    v2: &Interval,
    budget: &SearchBudget,
) -> Result<TransportWitness> {
    require_ordered(u1, u2)?;
    require_ordered(v1, v2)?;
    require_proper(v1, "target")?;
    require_proper(v2, "target")?;
    require_orbital(spec, &[u1, u2, v1, v2])?;
    let wanted = [
        (u1.clone(), Target::Within { interval: v1.clone() }),
        (u2.clone(), Target::Within { interval: v2.clone() }),
    ];
    let kit = Kit::new(spec, budget);
    let mut steps = Vec::new();
    let (e, prov) = pair_transport(&kit, (u1, u2), (v1, v2), &mut steps)?;
    finish("pair_transport", e, prov, steps, false, &wanted)
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalMinWitness {
    /// Read as open intervals.
    pub inner: Interval,
    pub outer: Interval,
    #[serde(serialize_with = "crate::rational::ser::one")]
    pub x: Rational,
    pub f1_word: Word,
    pub n: i64,
    #[serde(serialize_with = "crate::rational::ser::one")]
    pub image: Rational,
    pub support: Option<OpenInterval>,
    pub provenance: Provenance,
    pub steps: Vec<(String, Word)>,
}

fn support_within(f: &PiecewiseMap, v: &Interval) -> bool {
    match f.support_hull() {
        None => true,
        Some((lo, hi)) => lo.cmp_rational(&v.lo).is_ge() && hi.cmp_rational(&v.hi).is_le(),
    }
}

/// Least `n ≥ 0` with `x·fⁿ` in the open interval.
fn steps_into(f: &PiecewiseMap, x: &Rational, u: &Interval) -> Option<(i64, Rational)> {
    if u.contains_open(x) {
        return Some((0, x.clone()));
    }
    iterate_until(f, x, |y| u.contains_open(y)).or_else(|| iterate_until(&f.inverse(), x, |y| u.contains_open(y)).map(|(n, y)| (-n, y)))
}

impl LocalMinWitness {
    pub fn replay(&self, spec: &GroupSpec) -> Result<bool> {
        let f = spec.evaluate(&self.f1_word)?;
        let image = f.pow(self.n).apply(&self.x);
        Ok(support_within(&f, &self.outer)
            && image.as_ref() == Some(&self.image)
            && self.inner.contains_open(&self.image)
            && f.support_hull().map(|(lo, hi)| OpenInterval { lo, hi }) == self.support)
    }
}

/// Whether a short orbit of `x` under `f` enters the open interval; keeps
/// the fallback search predicate cheap.
fn lands_soon(f: &PiecewiseMap, x: &Rational, u: &Interval) -> bool {
    let mut y = x.clone();
    for _ in 0..256 {
        match f.apply(&y) {
            Some(z) if z != y => y = z,
            _ => return false,
        }
        if u.contains_open(&y) {
            return true;
        }
    }
    false
}

/// Rational strictly between the orbital end and the point, below it.
fn below(end: &Point, p: &Point) -> Result<Rational> {
    let (lo, _) = bracket(p)?;
    Ok(match end.rational_above() {
        Some(e) => midpoint(&e, &lo),
        None => lo - int(1),
    })
}

fn above(end: &Point, p: &Point) -> Result<Rational> {
    let (_, hi) = bracket(p)?;
    Ok(match end.rational_below() {
        Some(e) => midpoint(&e, &hi),
        None => hi + int(1),
    })
}

/// `(f1, n)` with the support of `f1` inside the open interval `v` and
/// `x·f1ⁿ` inside the open interval `u ⊂ v`.
pub fn local_minimality_witness(
    spec: &GroupSpec,
    u: &Interval,
    v: &Interval,
    x: &Rational,
    budget: &SearchBudget,
) -> Result<LocalMinWitness> {
    require_proper(u, "inner interval")?;
    if !u.is_subset_of(v) {
        return Err(Error::precondition(format!("{u} is not inside {v}")));
    }
    if !v.contains_open(x) {
        return Err(Error::precondition(format!("{} is not in {v}", fmt_rational(x))));
    }
    let emit = |f1: Elt, provenance, steps| -> Result<LocalMinWitness> {
        let (n, image) = steps_into(&f1.map, x, u).ok_or_else(|| Error::Internal("local_min: no power lands".into()))?;
        if !support_within(&f1.map, v) {
            return Err(Error::Internal("local_min: support leaves the outer interval".into()));
        }
        Ok(LocalMinWitness {
            inner: u.clone(),
            outer: v.clone(),
            x: x.clone(),
            support: f1.map.support_hull().map(|(lo, hi)| OpenInterval { lo, hi }),
            f1_word: f1.word,
            n,
            image,
            provenance,
            steps,
        })
    };
    if u.contains_open(x) {
        return emit(Elt::identity(spec), Provenance::Trivial, Vec::new());
    }
    let kit = Kit::new(spec, budget);
    let mut steps = Vec::new();
    let (f1, prov) = recipe_or_search(
        &kit,
        &mut steps,
        |steps| {
            let orbital = require_orbital(spec, &[u, v])?;
            let seed = kit.compact_seed()?;
            let comp = seed.map.support_components().remove(0);
            let (hull_lo, hull_hi) = seed.map.support_hull().expect("seed is nontrivial");
            let (r1, r4) = (below(&orbital.0, &hull_lo)?, above(&orbital.1, &hull_hi)?);
            let (_, c_lo) = bracket(&comp.lo)?;
            let (c_hi, _) = bracket(&comp.hi)?;
            let low = Interval::new(r1, c_lo)?;
            let high = Interval::new(c_hi, r4)?;
            // place the seed inside v with the end of one component of its
            // support in u and x strictly inside that component
            let rising = *x <= u.lo;
            let (to_low, to_high) = if rising {
                let d = x - &v.lo;
                let near = Interval::new(&v.lo + &d / int(4), &v.lo + &d * int(3) / int(4))?;
                (near, u.core())
            } else {
                let d = &v.hi - x;
                let near = Interval::new(x + &d / int(4), x + &d * int(3) / int(4))?;
                (u.core(), near)
            };
            let g = pair_transport(&kit, (&low, &high), (&to_low, &to_high), &mut Vec::new())?.0;
            let s = comp.sample();
            let increasing = seed.apply(&s) > s;
            let f = if increasing == rising { seed.clone() } else { seed.inverse() };
            steps.push(("seed".into(), f.word.clone()));
            steps.push(("placement".into(), g.word.clone()));
            Ok(f.conj(&g))
        },
        |f| {
            support_within(f, v)
                && !f.is_identity()
                && lands_soon(f, x, u)
        },
    )?;
    emit(f1, prov, steps)
}

#[derive(Debug, Clone, Serialize)]
pub struct HigmanWitness {
    pub alpha: Word,
    pub beta: Word,
    pub gamma: Word,
    pub rho_word: Word,
    /// Closed interval covering the supports of α and β.
    pub moved_set_cover: Interval,
    pub rho_image: Interval,
    pub gamma_image: Interval,
    pub disjoint: bool,
    pub provenance: Provenance,
}

impl HigmanWitness {
    pub fn replay(&self, spec: &GroupSpec) -> Result<bool> {
        let rho = spec.evaluate(&self.rho_word)?;
        let gamma = spec.evaluate(&self.gamma)?;
        let s = self.moved_set_cover.image(&rho)?;
        let t = s.image(&gamma)?;
        Ok(s == self.rho_image && t == self.gamma_image && s.is_disjoint_from(&t) == self.disjoint && self.disjoint)
    }
}

/// Rational closed interval containing both supports.
fn support_cover(a: &PiecewiseMap, b: &PiecewiseMap) -> Result<Interval> {
    let (a_lo, a_hi) = a.support_hull().expect("nontrivial");
    let (b_lo, b_hi) = b.support_hull().expect("nontrivial");
    let lo = bracket(&a_lo.min(b_lo))?.0;
    let hi = bracket(&a_hi.max(b_hi))?.1;
    Interval::new(lo, hi)
}

/// ρ moving a cover of the supports of α and β into an interval that γ
/// moves off itself.
pub fn higman_witness(
    spec: &GroupSpec,
    alpha: &Word,
    beta: &Word,
    gamma: &Word,
    budget: &SearchBudget,
) -> Result<HigmanWitness> {
    let (a, b, c) = (spec.evaluate(alpha)?, spec.evaluate(beta)?, spec.evaluate(gamma)?);
    for (w, f) in [(alpha, &a), (beta, &b)] {
        if f.is_identity() || !is_compact(f) {
            return Err(Error::precondition(format!("{w} is not a nontrivial compactly supported element")));
        }
    }
    if c.is_identity() {
        return Err(Error::precondition(format!("{gamma} is the identity")));
    }
    let cover = support_cover(&a, &b)?;
    let emit = |rho: Elt, provenance| -> Result<HigmanWitness> {
        let s = cover.image(&rho.map)?;
        let t = s.image(&c)?;
        if !s.is_disjoint_from(&t) {
            return Err(Error::Internal("higman: images overlap".into()));
        }
        Ok(HigmanWitness {
            alpha: alpha.clone(),
            beta: beta.clone(),
            gamma: gamma.clone(),
            rho_word: rho.word,
            moved_set_cover: cover.clone(),
            rho_image: s,
            gamma_image: t,
            disjoint: true,
            provenance,
        })
    };
    if cover.is_disjoint_from(&cover.image(&c)?) {
        return emit(Elt::identity(spec), Provenance::Trivial);
    }
    let orbital = common_orbital(spec, &[cover.lo.clone(), cover.hi.clone()])?;
    // an interval that γ moves off itself, in the orbital of the cover
    let comp = c
        .support_components()
        .into_iter()
        .find(|k| k.lo >= orbital.0 && k.hi <= orbital.1)
        .ok_or_else(|| Error::precondition(format!("{gamma} does not act on the orbital of the supports")))?;
    let y = comp.sample();
    let y_moved = c.apply(&y).expect("in domain");
    let mid = midpoint(&y, &y_moved);
    let target = if y_moved > y {
        Interval::new(y, mid)?
    } else {
        Interval::new(mid, y)?
    };
    let kit = Kit::new(spec, budget);
    let (rho, prov) = interval_into(&kit, &cover, &target, &mut Vec::new())?;
    emit(rho, prov)
}

#[derive(Debug, Clone, Serialize)]
pub struct FullySupportedWitness {
    pub word: Word,
    pub provenance: Provenance,
}

fn fully_supported(f: &PiecewiseMap) -> bool {
    !f.is_identity() && interior_fixed(f).is_empty()
}

impl FullySupportedWitness {
    pub fn replay(&self, spec: &GroupSpec) -> Result<bool> {
        Ok(fully_supported(&spec.evaluate(&self.word)?))
    }
}

/// A word without fixed points in the interior of the domain: the
/// shortlex-least one when the search finds it, otherwise `fⁿ g₁ⁿ` from a
/// ray element and a conjugated mirror ray element.
pub fn fully_supported_witness(spec: &GroupSpec, budget: &SearchBudget) -> Result<FullySupportedWitness> {
    let searched = match find_word_satisfying(spec, fully_supported, budget) {
        Ok(found) => {
            return Ok(FullySupportedWitness {
                word: found.word,
                provenance: Provenance::Search,
            })
        }
        Err(e) if e.is_budget_exhausted() => e,
        Err(e) => return Err(e),
    };
    let kit = Kit::new(spec, budget);
    let recipe = || -> Result<Option<Elt>> {
        let up = kit.ray_up()?;
        let down = kit.ray_down()?;
        let (Some((_, top)), Some((bottom, _))) = (
            super::extreme_fixed_points(&up.map),
            super::extreme_fixed_points(&down.map),
        ) else {
            return Ok(None);
        };
        let (b_lo, _) = bracket(&bottom)?;
        let (_, t_hi) = bracket(&top)?;
        // overlap the increasing ends of the two rays
        let h = kit.send_into(&[b_lo], &Point::Rational(t_hi), &Point::PosInf)?;
        let g1 = down.conj(&h);
        Ok((1..=8).map(|n| up.pow(n).then(&g1.pow(n))).find(|e| fully_supported(&e.map)))
    };
    match recipe() {
        Ok(Some(e)) => Ok(FullySupportedWitness {
            word: e.word,
            provenance: Provenance::Recipe,
        }),
        _ => Err(searched),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_str;
    use crate::rational::rat;

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    fn budget() -> SearchBudget {
        SearchBudget::new(100_000, 12).unwrap()
    }

    #[test]
    fn move_point_dyadic() {
        let d = build_str("f-dyadic").unwrap();
        let w = move_point_witness(&d, &rat(1, 4), &rat(3, 4), &budget()).unwrap();
        assert!(w.replay(&d).unwrap());
        assert!(w.compactly_supported);
        assert!(move_point_witness(&d, &rat(1, 4), &rat(1, 4), &budget()).is_err());
    }

    #[test]
    fn move_point_broken_bs() {
        let bs = build_str("broken-bs:2").unwrap();
        let w = move_point_witness(&bs, &int(0), &int(1), &budget()).unwrap();
        assert!(w.replay(&bs).unwrap());
    }

    #[test]
    fn interval_into_dyadic() {
        let d = build_str("f-dyadic").unwrap();
        let w = interval_into_witness(&d, &iv((1, 2), (5, 8)), &iv((1, 8), (1, 4)), &budget()).unwrap();
        assert_eq!(w.provenance, Provenance::Recipe);
        assert!(w.replay(&d).unwrap());
        let w = interval_into_witness(&d, &iv((1, 4), (3, 8)), &iv((1, 8), (1, 2)), &budget()).unwrap();
        assert!(w.word.is_empty());
        assert!(interval_into_witness(&d, &iv((1, 4), (3, 8)), &iv((1, 8), (1, 8)), &budget()).is_err());
    }

    #[test]
    fn fix_push_and_anchor() {
        let d = build_str("f-dyadic").unwrap();
        let (u, v) = (iv((1, 8), (1, 4)), iv((1, 2), (5, 8)));
        let w = fix_and_push_witness(&d, &u, &v, &rat(3, 4), &budget()).unwrap();
        assert!(w.replay(&d).unwrap());
        let w = fix_and_push_witness(&d, &u, &v, &rat(1, 4), &budget()).unwrap();
        assert!(w.word.is_empty());
        assert!(fix_and_push_witness(&d, &v, &u, &rat(3, 4), &budget()).is_err());
        let w = push_with_anchor_witness(&d, &u, &v, &iv((1, 16), (1, 8)), &rat(3, 4), &budget()).unwrap();
        assert!(w.replay(&d).unwrap());
    }

    #[test]
    fn pair_transport_dyadic() {
        let d = build_str("f-dyadic").unwrap();
        let (u1, u2, v1, v2) = (iv((1, 8), (1, 4)), iv((1, 2), (5, 8)), iv((1, 16), (1, 8)), iv((3, 4), (7, 8)));
        let w = pair_transport_witness(&d, &u1, &u2, &v1, &v2, &budget()).unwrap();
        assert!(w.replay(&d).unwrap());
        let w = pair_transport_witness(&d, &u1, &u2, &u1, &u2, &budget()).unwrap();
        assert!(w.word.is_empty());
        assert!(pair_transport_witness(&d, &u2, &u1, &v1, &v2, &budget()).is_err());
    }

    #[test]
    fn local_min_dyadic() {
        let d = build_str("f-dyadic").unwrap();
        let (u, v) = (iv((1, 4), (3, 8)), iv((1, 8), (7, 8)));
        let w = local_minimality_witness(&d, &u, &v, &rat(1, 2), &budget()).unwrap();
        assert!(w.replay(&d).unwrap());
        let w = local_minimality_witness(&d, &u, &v, &rat(5, 16), &budget()).unwrap();
        assert_eq!(w.n, 0);
        assert!(w.f1_word.is_empty());
    }

    #[test]
    fn higman_dyadic() {
        let d = build_str("f-dyadic").unwrap();
        let alpha = Word::parse("x1 x0^-1 x1^-1 x0").unwrap();
        let beta = Word::parse("x0^-1 x1 x0^-1 x1^-1 x0 x0").unwrap();
        let gamma = Word::parse("x0^-1 x1 x0 x1^-1").unwrap();
        let w = higman_witness(&d, &alpha, &beta, &gamma, &budget()).unwrap();
        assert!(w.replay(&d).unwrap());
        assert!(higman_witness(&d, &alpha, &beta, &Word::empty(), &budget()).is_err());
    }

    #[test]
    fn fully_supported_catalog() {
        for key in ["f-projective", "broken-bs:2"] {
            let g = build_str(key).unwrap();
            let w = fully_supported_witness(&g, &budget()).unwrap();
            assert_eq!(w.word.to_string(), "a");
        }
        let d = build_str("f-dyadic").unwrap();
        assert_eq!(fully_supported_witness(&d, &budget()).unwrap().word.to_string(), "x0");
    }
}
