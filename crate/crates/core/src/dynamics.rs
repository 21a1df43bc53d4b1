//! Empirical orbit sampling: orbit points up to a word length, gaps in a
//! window, and a density probe for minimality.
//!
//! Depths and gap thresholds are calibration constants; a pass is evidence
//! of dense orbits, not a proof.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::point::Point;
use crate::rational::{fmt_rational, int, Rational};
use crate::search::letter_maps;
use crate::spec::GroupSpec;
use crate::witness::common_orbital;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitSample {
    #[serde(serialize_with = "crate::rational::ser::one")]
    pub start: Rational,
    pub depth: usize,
    #[serde(serialize_with = "crate::rational::ser::many")]
    pub points: Vec<Rational>,
}

/// Images of `start` under all words of length at most `depth`, sorted.
pub fn orbit_sample(spec: &GroupSpec, start: &Rational, depth: usize) -> Result<OrbitSample> {
    if !spec.domain.contains_interior(start) {
        return Err(Error::precondition(format!(
            "{} is not in the interior of the domain",
            fmt_rational(start)
        )));
    }
    let maps = letter_maps(spec);
    let mut seen: BTreeSet<Rational> = BTreeSet::from([start.clone()]);
    let mut frontier = vec![start.clone()];
    for _ in 0..depth {
        if frontier.is_empty() {
            break;
        }
        let images: Vec<Rational> = frontier
            .par_iter()
            .flat_map_iter(|x| maps.iter().map(move |m| m.apply(x).expect("point in domain")))
            .collect();
        frontier = images.into_iter().filter(|y| seen.insert(y.clone())).collect();
    }
    Ok(OrbitSample {
        start: start.clone(),
        depth,
        points: seen.into_iter().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub window: Interval,
    #[serde(serialize_with = "crate::rational::ser::one")]
    pub max_gap: Rational,
    pub point_count: usize,
}

/// Largest gap between consecutive sample points in the window, counting
/// the window edges.
pub fn density_report(sample: &OrbitSample, window: &Interval) -> DensityReport {
    let inside: Vec<&Rational> = sample.points.iter().filter(|p| window.contains(p)).collect();
    let mut max_gap = int(0);
    let mut prev = &window.lo;
    for p in inside.iter().copied().chain(std::iter::once(&window.hi)) {
        let gap = p - prev;
        if gap > max_gap {
            max_gap = gap;
        }
        prev = p;
    }
    DensityReport {
        window: window.clone(),
        max_gap,
        point_count: inside.len(),
    }
}

/// The window probed on an orbital: its closed middle half, after replacing
/// an infinite end by a point two units beyond the other end (or `∓1` when
/// both ends are infinite).
pub fn probe_window(lo: &Point, hi: &Point) -> Result<Interval> {
    let l = match (lo.rational_above(), hi.rational_below()) {
        (Some(l), _) => l,
        (None, Some(r)) => r - int(2),
        (None, None) => int(-1),
    };
    let r = match hi.rational_below() {
        Some(r) => r,
        None => &l + int(2),
    };
    Ok(Interval::new(l, r)?.core())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MinimalityProbe {
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
        /// Set when the worst gap did not shrink over the last step of
        /// depth: orbits may be discrete or accumulate on an exceptional
        /// minimal set rather than merely converge slowly.
        stagnant: bool,
    },
}

impl MinimalityProbe {
    pub fn passed(&self) -> bool {
        matches!(self, MinimalityProbe::EmpiricalPass { .. })
    }
}

/// Passes when every start's orbit leaves no gap wider than `epsilon` in
/// the middle half of the common orbital.
pub fn minimality_probe(spec: &GroupSpec, starts: &[Rational], depth: usize, epsilon: &Rational) -> Result<MinimalityProbe> {
    let (lo, hi) = common_orbital(spec, starts)?;
    probe_in_window(spec, starts, depth, epsilon, probe_window(&lo, &hi)?)
}

/// As [`minimality_probe`] with an explicit window and no orbital check.
pub fn probe_in_window(
    spec: &GroupSpec,
    starts: &[Rational],
    depth: usize,
    epsilon: &Rational,
    window: Interval,
) -> Result<MinimalityProbe> {
    let mut worst: Option<(Rational, Rational)> = None;
    for s in starts {
        let gap = density_report(&orbit_sample(spec, s, depth)?, &window).max_gap;
        if worst.as_ref().is_none_or(|(g, _)| gap > *g) {
            worst = Some((gap, s.clone()));
        }
    }
    let (worst_gap, start) = worst.ok_or_else(|| Error::precondition("no starting points"))?;
    if worst_gap <= *epsilon {
        return Ok(MinimalityProbe::EmpiricalPass {
            epsilon: epsilon.clone(),
            depth,
            worst_gap,
            window,
        });
    }
    let stagnant = depth > 0 && density_report(&orbit_sample(spec, &start, depth - 1)?, &window).max_gap == worst_gap;
    Ok(MinimalityProbe::EmpiricalFail {
        worst_gap,
        start,
        window,
        stagnant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_str;
    use crate::pmap::{Domain, PiecewiseMap};
    use crate::point::ExtPoint;
    use crate::rational::rat;
    use crate::spec::Generator;

    fn sample(points: Vec<Rational>) -> OrbitSample {
        OrbitSample {
            start: points[0].clone(),
            depth: 1,
            points,
        }
    }

    fn single_bump() -> GroupSpec {
        // 2t/(1+t) on [0, 1]
        let map = PiecewiseMap::from_rows(
            Domain::unit(),
            vec![(ExtPoint::Finite(int(0)), ExtPoint::Finite(int(1)), [int(2), int(0), int(1), int(1)])],
        )
        .unwrap();
        GroupSpec::new(
            "bump",
            Domain::unit(),
            vec![Generator {
                name: "u".into(),
                map,
            }],
        )
        .unwrap()
    }

    #[test]
    fn dyadic_orbit() {
        let d = build_str("f-dyadic").unwrap();
        let o = orbit_sample(&d, &rat(1, 3), 0).unwrap();
        assert_eq!(o.points, vec![rat(1, 3)]);
        let o = orbit_sample(&d, &rat(1, 3), 2).unwrap();
        assert!(o.points.contains(&rat(1, 6)));
        assert!(o.points.contains(&rat(2, 3)));
        assert!(orbit_sample(&d, &int(0), 2).is_err());
    }

    #[test]
    fn gaps() {
        let w = Interval::new(int(0), int(1)).unwrap();
        let r = density_report(&sample(vec![rat(1, 4), rat(1, 2), rat(3, 4)]), &w);
        assert_eq!(r.max_gap, rat(1, 4));
        assert_eq!(r.point_count, 3);
        let r = density_report(&sample(vec![int(5)]), &w);
        assert_eq!(r.max_gap, int(1));
    }

    #[test]
    fn windows() {
        let w = probe_window(&Point::Rational(int(0)), &Point::Rational(int(1))).unwrap();
        assert_eq!(w, Interval::new(rat(1, 4), rat(3, 4)).unwrap());
        let w = probe_window(&Point::NegInf, &Point::PosInf).unwrap();
        assert_eq!(w, Interval::new(rat(-1, 2), rat(1, 2)).unwrap());
        let w = probe_window(&Point::Rational(int(0)), &Point::PosInf).unwrap();
        assert_eq!(w, Interval::new(rat(1, 2), rat(3, 2)).unwrap());
    }

    #[test]
    fn bump_fails_and_loose_epsilon_passes() {
        let b = single_bump();
        let p = minimality_probe(&b, &[rat(1, 3)], 8, &rat(1, 64)).unwrap();
        assert!(!p.passed());
        let p = minimality_probe(&b, &[rat(1, 3)], 8, &int(1)).unwrap();
        assert!(p.passed());
    }
}
