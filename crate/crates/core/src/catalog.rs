//! Named example groups.
//!
//! Keys in text form: `f-dyadic`, `f-projective`, `f-projective+c`,
//! `stein:2,3`, `broken-bs:2`, `bieri-strebel:2,3/2;6`, `pre-chain`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::flmap::FracLinearMap;
use crate::pmap::{Domain, Piece, PiecewiseMap};
use crate::point::ExtPoint;
use crate::rational::{fmt_rational, int, parse_rational, rat, Rational};
use crate::spec::{Assertion, Generator, GroupSpec, Metadata};
use crate::witness::relations;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogKey {
    FDyadic,
    /// `a` and `b` of the projective model; `with_c` adds the extra bump.
    FProjective { with_c: bool },
    Stein(Vec<u64>),
    BrokenBS(Rational),
    BieriStrebel { slopes: Vec<Rational>, denominator: u64 },
    PreChain(Vec<PiecewiseMap>),
}

/// Keys listed by `catalog list`.
pub const KEYS: &[&str] = &[
    "f-dyadic",
    "f-projective",
    "f-projective+c",
    "stein:2,3",
    "stein:2,3,5",
    "broken-bs:2",
    "bieri-strebel:2,3/2;6",
    "pre-chain",
];

impl CatalogKey {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidKey(format!("`{s}`: {why}"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let key = match (head, arg) {
            ("f-dyadic", None) => CatalogKey::FDyadic,
            ("f-projective", None) => CatalogKey::FProjective { with_c: false },
            ("f-projective+c", None) => CatalogKey::FProjective { with_c: true },
            ("pre-chain", None) => CatalogKey::PreChain(default_chain()),
            ("stein", Some(a)) => CatalogKey::Stein(
                a.split(',')
                    .map(|p| p.trim().parse::<u64>().map_err(|_| bad("primes must be integers")))
                    .collect::<Result<_>>()?,
            ),
            ("broken-bs", Some(a)) => {
                CatalogKey::BrokenBS(parse_rational(a.trim()).ok_or_else(|| bad("lambda must be rational"))?)
            }
            ("bieri-strebel", Some(a)) => {
                let (slopes, n) = a.split_once(';').ok_or_else(|| bad("expected slopes;denominator"))?;
                CatalogKey::BieriStrebel {
                    slopes: slopes
                        .split(',')
                        .map(|x| parse_rational(x.trim()).ok_or_else(|| bad("slopes must be rational")))
                        .collect::<Result<_>>()?,
                    denominator: n.trim().parse().map_err(|_| bad("denominator must be an integer"))?,
                }
            }
            _ => return Err(bad("unknown catalog key")),
        };
        key.validate()?;
        Ok(key)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |why: String| Err(Error::InvalidKey(why));
        match self {
            CatalogKey::FDyadic | CatalogKey::FProjective { .. } => Ok(()),
            CatalogKey::Stein(primes) => {
                if primes.is_empty() {
                    return bad("stein needs at least one prime".into());
                }
                for (i, p) in primes.iter().enumerate() {
                    if !is_prime(*p) {
                        return bad(format!("{p} is not prime"));
                    }
                    if primes[..i].contains(p) {
                        return bad(format!("prime {p} listed twice"));
                    }
                }
                Ok(())
            }
            CatalogKey::BrokenBS(l) => {
                if !l.is_positive() || l.is_one() {
                    return bad(format!("lambda must be positive and not 1, got {}", fmt_rational(l)));
                }
                Ok(())
            }
            CatalogKey::BieriStrebel { slopes, denominator } => {
                if *denominator < 2 {
                    return bad("denominator must be at least 2".into());
                }
                let n = BigInt::from(*denominator);
                for s in slopes {
                    if !s.is_positive() || s.is_one() {
                        return bad(format!("slope {} must be positive and not 1", fmt_rational(s)));
                    }
                    if !divides_power(s.numer(), &n) || !divides_power(s.denom(), &n) {
                        return bad(format!(
                            "slope {} is not a unit of Z[1/{denominator}]",
                            fmt_rational(s)
                        ));
                    }
                }
                if slopes.is_empty() {
                    return bad("bieri-strebel needs at least one slope".into());
                }
                Ok(())
            }
            CatalogKey::PreChain(bumps) => validate_chain(bumps),
        }
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogKey::FDyadic => f.write_str("f-dyadic"),
            CatalogKey::FProjective { with_c: false } => f.write_str("f-projective"),
            CatalogKey::FProjective { with_c: true } => f.write_str("f-projective+c"),
            CatalogKey::Stein(ps) => {
                let ps: Vec<String> = ps.iter().map(u64::to_string).collect();
                write!(f, "stein:{}", ps.join(","))
            }
            CatalogKey::BrokenBS(l) => write!(f, "broken-bs:{}", fmt_rational(l)),
            CatalogKey::BieriStrebel { slopes, denominator } => {
                let ss: Vec<String> = slopes.iter().map(fmt_rational).collect();
                write!(f, "bieri-strebel:{};{denominator}", ss.join(","))
            }
            CatalogKey::PreChain(_) => f.write_str("pre-chain"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Every prime factor of `x` divides `n`.
fn divides_power(x: &BigInt, n: &BigInt) -> bool {
    crate::rational::denominator_divides_power_of(&Rational::new(BigInt::one(), x.abs()), n)
}

fn fin(r: Rational) -> ExtPoint {
    ExtPoint::Finite(r)
}

fn affine(slope: Rational, intercept: Rational) -> FracLinearMap {
    FracLinearMap::affine(&slope, &intercept).expect("positive slope")
}

/// Slope `λ` on `[0,a]`, a translation in the middle and slope `1/λ` on
/// `[1-λa, 1]`.
fn three_slope_map(lambda: &Rational, a: &Rational) -> Result<PiecewiseMap> {
    let one = int(1);
    let b = &one - lambda * a;
    PiecewiseMap::canonicalize(
        Domain::unit(),
        vec![
            Piece::new(fin(int(0)), fin(a.clone()), affine(lambda.clone(), int(0))),
            Piece::new(fin(a.clone()), fin(b.clone()), affine(one.clone(), (lambda - &one) * a)),
            Piece::new(fin(b), fin(one.clone()), affine(one.clone() / lambda, &one - &one / lambda)),
        ],
    )
}

/// The copy of `f` acting on `[u,1]` through the affine bijection
/// `[0,1] → [u,1]`; identity on `[0,u]`.
fn rescaled(f: &PiecewiseMap, u: &Rational) -> Result<PiecewiseMap> {
    let one = int(1);
    let w = &one - u;
    // conjugation by t ↦ u + w·t
    let into = affine(w.clone(), u.clone());
    let out = into.inverse();
    let mut pieces = vec![Piece::new(fin(int(0)), fin(u.clone()), FracLinearMap::identity())];
    for p in f.pieces() {
        let l = p.left.finite().expect("unit interval");
        let r = p.right.finite().expect("unit interval");
        pieces.push(Piece::new(
            fin(u + &w * l),
            fin(u + &w * r),
            out.then(&p.map).then(&into),
        ));
    }
    PiecewiseMap::canonicalize(Domain::unit(), pieces)
}

fn gens(named: Vec<(&str, PiecewiseMap)>) -> Vec<Generator> {
    named
        .into_iter()
        .map(|(n, map)| Generator {
            name: n.to_string(),
            map,
        })
        .collect()
}

pub fn build(key: &CatalogKey) -> Result<GroupSpec> {
    key.validate()?;
    match key {
        CatalogKey::FDyadic => f_dyadic(),
        CatalogKey::FProjective { with_c } => f_projective(*with_c),
        CatalogKey::Stein(primes) => stein(primes),
        CatalogKey::BrokenBS(l) => broken_bs(l),
        CatalogKey::BieriStrebel { slopes, denominator } => bieri_strebel(slopes, *denominator),
        CatalogKey::PreChain(bumps) => pre_chain(bumps),
    }
}

pub fn build_str(key: &str) -> Result<GroupSpec> {
    build(&CatalogKey::parse(key)?)
}

fn f_dyadic() -> Result<GroupSpec> {
    let x0 = three_slope_map(&rat(1, 2), &rat(1, 2))?;
    let x1 = rescaled(&x0, &rat(1, 2))?;
    let spec = GroupSpec::new("f_dyadic", Domain::unit(), gens(vec![("x0", x0), ("x1", x1)]))?;
    Ok(spec.with_metadata(Metadata {
        slope_primes: vec![2],
        breakpoints: Some("Z[1/2]".into()),
        coherent: Some(Assertion {
            value: true,
            note: "Thompson's group F on [0,1]".into(),
        }),
        ..Metadata::default()
    }))
}

fn f_projective(with_c: bool) -> Result<GroupSpec> {
    let line = Domain::Line;
    let rows = |rows: Vec<(ExtPoint, ExtPoint, [i64; 4])>| {
        PiecewiseMap::from_rows(
            Domain::Line,
            rows.into_iter()
                .map(|(l, r, c)| (l, r, c.map(int)))
                .collect(),
        )
    };
    let (ninf, pinf) = (ExtPoint::NegInf, ExtPoint::PosInf);
    let a = rows(vec![(ninf.clone(), pinf.clone(), [1, 1, 0, 1])])?;
    let b = rows(vec![
        (ninf.clone(), fin(int(0)), [1, 0, 0, 1]),
        (fin(int(0)), fin(rat(1, 2)), [1, 0, -1, 1]),
        (fin(rat(1, 2)), fin(int(1)), [3, -1, 1, 0]),
        (fin(int(1)), pinf.clone(), [1, 1, 0, 1]),
    ])?;
    let mut named = vec![("a", a.clone()), ("b", b.clone())];
    let mut notes = vec![
        "F-isomorphism asserted from literature, relation-checked at build time".to_string(),
    ];
    if with_c {
        let c = rows(vec![
            (ninf, fin(int(0)), [1, 0, 0, 1]),
            (fin(int(0)), fin(int(1)), [2, 0, 1, 1]),
            (fin(int(1)), pinf, [1, 0, 0, 1]),
        ])?;
        named.push(("c", c));
        notes.push("generator c extends beyond F".into());
    }
    let spec = GroupSpec::new(
        if with_c { "f_projective_c" } else { "f_projective" },
        line,
        gens(named),
    )?;
    // the two-generator subgroup must satisfy the F relators
    let sub = GroupSpec::new("f_projective", Domain::Line, gens(vec![("a", a), ("b", b)]))?;
    match relations::find_f_assignment(&sub, 2)? {
        Some(found) => notes.push(format!("F relators hold for a = {}, b = {}", found.a, found.b)),
        None => {
            return Err(Error::Internal(
                "F relators fail for every assignment over words of length <= 2".into(),
            ))
        }
    }
    Ok(spec.with_metadata(Metadata {
        breakpoints: Some("Q".into()),
        coherent: Some(Assertion {
            value: true,
            note: "overgroup of the projective model of F".into(),
        }),
        notes,
        ..Metadata::default()
    }))
}

fn stein(primes: &[u64]) -> Result<GroupSpec> {
    let q = *primes.iter().min().expect("validated nonempty");
    let a = rat(1, q as i64);
    let mut named = Vec::new();
    for &p in primes {
        let f = three_slope_map(&rat(1, p as i64), &a)?;
        let g = rescaled(&f, &a)?;
        let (n0, n1) = if p == 2 {
            ("x0".to_string(), "x1".to_string())
        } else {
            (format!("x0_{p}"), format!("x1_{p}"))
        };
        named.push((n0, f));
        named.push((n1, g));
    }
    let generators: Vec<Generator> = named.into_iter().map(|(name, map)| Generator { name, map }).collect();
    let prod: u64 = primes.iter().product();
    let ps: Vec<String> = primes.iter().map(u64::to_string).collect();
    let spec = GroupSpec::new(format!("stein_{}", ps.join("_")), Domain::unit(), generators)?;
    check_pl_membership(&spec, &primes.iter().map(|&p| BigInt::from(p)).collect::<Vec<_>>(), prod)?;
    Ok(spec.with_metadata(Metadata {
        slope_primes: primes.to_vec(),
        breakpoints: Some(format!("Z[1/{prod}]")),
        ..Metadata::default()
    }))
}

/// Slopes are products of the given primes and breakpoints lie in `Z[1/n]`.
fn check_pl_membership(spec: &GroupSpec, primes: &[BigInt], n: u64) -> Result<()> {
    let n = BigInt::from(n);
    let radical: BigInt = primes.iter().product();
    for g in spec.generators() {
        for p in g.map.pieces() {
            let slope = p
                .map
                .slope()
                .ok_or_else(|| Error::Internal(format!("{} is not piecewise linear", g.name)))?;
            if !divides_power(slope.numer(), &radical) || !divides_power(slope.denom(), &radical) {
                return Err(Error::Internal(format!(
                    "{} has slope {} outside the slope group",
                    g.name,
                    fmt_rational(&slope)
                )));
            }
        }
        for x in g.map.breakpoints() {
            if !crate::rational::denominator_divides_power_of(&x, &n) {
                return Err(Error::Internal(format!(
                    "{} has breakpoint {} outside Z[1/{n}]",
                    g.name,
                    fmt_rational(&x)
                )));
            }
        }
    }
    Ok(())
}

fn broken_bs(lambda: &Rational) -> Result<GroupSpec> {
    let (ninf, pinf, zero) = (ExtPoint::NegInf, ExtPoint::PosInf, fin(int(0)));
    let id = FracLinearMap::identity();
    let scale = affine(lambda.clone(), int(0));
    let a = PiecewiseMap::canonicalize(
        Domain::Line,
        vec![Piece::new(ninf.clone(), pinf.clone(), FracLinearMap::translation(&int(1)))],
    )?;
    let b_plus = PiecewiseMap::canonicalize(
        Domain::Line,
        vec![
            Piece::new(ninf.clone(), zero.clone(), scale.clone()),
            Piece::new(zero.clone(), pinf.clone(), id.clone()),
        ],
    )?;
    let b_minus = PiecewiseMap::canonicalize(
        Domain::Line,
        vec![Piece::new(ninf, zero.clone(), id), Piece::new(zero, pinf, scale)],
    )?;
    let spec = GroupSpec::new(
        format!("broken_bs_{}", fmt_rational(lambda).replace('/', "_")),
        Domain::Line,
        gens(vec![("a", a), ("b+", b_plus), ("b-", b_minus)]),
    )?;
    Ok(spec.with_metadata(Metadata {
        slope_generators: vec![lambda.clone()],
        coherent: Some(Assertion {
            value: true,
            note: "broken Baumslag-Solitar actions are coherent (literature)".into(),
        }),
        notes: vec!["germ groups at both ends are metabelian".into()],
        ..Metadata::default()
    }))
}

fn bieri_strebel(slopes: &[Rational], denominator: u64) -> Result<GroupSpec> {
    let n = BigInt::from(denominator);
    let u = rat(1, denominator as i64);
    let mut generators = Vec::new();
    for (i, lambda) in slopes.iter().enumerate() {
        // a = n^-k, with k least such that a < 1/(1+λ)
        let bound = int(1) / (int(1) + lambda);
        let mut a = Rational::new(BigInt::one(), n.clone());
        while a >= bound {
            a /= Rational::from_integer(n.clone());
        }
        let f = three_slope_map(lambda, &a)?;
        let g = rescaled(&f, &u)?;
        generators.push(Generator {
            name: format!("f{i}"),
            map: f,
        });
        generators.push(Generator {
            name: format!("g{i}"),
            map: g,
        });
    }
    let ss: Vec<String> = slopes.iter().map(|s| fmt_rational(s).replace('/', "_")).collect();
    let spec = GroupSpec::new(
        format!("bieri_strebel_{}_{denominator}", ss.join("_")),
        Domain::unit(),
        generators,
    )?;
    let primes: Vec<BigInt> = prime_factors(&n);
    check_pl_membership(&spec, &primes, denominator)?;
    Ok(spec.with_metadata(Metadata {
        slope_generators: slopes.to_vec(),
        breakpoints: Some(format!("Z[1/{denominator}]")),
        ..Metadata::default()
    }))
}

fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            while n.is_multiple_of(&d) {
                n /= &d;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// Each bump has one bounded support component `(l_i, r_i)`, moves points
/// up, and consecutive supports satisfy `l_i < l_{i+1} < r_i < r_{i+1}`.
fn validate_chain(bumps: &[PiecewiseMap]) -> Result<()> {
    let bad = |why: String| Err(Error::InvalidKey(why));
    if bumps.len() < 2 {
        return bad("a pre-chain needs at least two bumps".into());
    }
    let mut prev: Option<(Rational, Rational)> = None;
    for (i, f) in bumps.iter().enumerate() {
        let comps = f.support_components();
        let [comp] = comps.as_slice() else {
            return bad(format!("bump {i} must have exactly one support component"));
        };
        let (Some(l), Some(r)) = (comp.lo.as_rational(), comp.hi.as_rational()) else {
            return bad(format!("bump {i} must have a bounded support with rational ends"));
        };
        let x = comp.sample();
        if f.apply(&x).is_none_or(|y| y <= x) {
            return bad(format!("bump {i} must move points up"));
        }
        if let Some((pl, pr)) = &prev {
            if !(pl < l && l < pr && pr < r) {
                return bad(format!("bumps {} and {i} do not form a chain", i - 1));
            }
        }
        prev = Some((l.clone(), r.clone()));
    }
    Ok(())
}

/// Two overlapping bumps: `t ↦ 2t/(1+t)` on `[0,1]` and its translate to `[1/2,3/2]`.
pub fn default_chain() -> Vec<PiecewiseMap> {
    let bump = |shift: Rational| {
        let s = FracLinearMap::translation(&shift);
        let core = FracLinearMap::from_ints(2, 0, 1, 1).expect("valid");
        PiecewiseMap::canonicalize(
            Domain::Line,
            vec![
                Piece::new(ExtPoint::NegInf, fin(shift.clone()), FracLinearMap::identity()),
                Piece::new(
                    fin(shift.clone()),
                    fin(&shift + int(1)),
                    s.inverse().then(&core).then(&s),
                ),
                Piece::new(fin(&shift + int(1)), ExtPoint::PosInf, FracLinearMap::identity()),
            ],
        )
        .expect("valid bump")
    };
    vec![bump(int(0)), bump(rat(1, 2))]
}

fn pre_chain(bumps: &[PiecewiseMap]) -> Result<GroupSpec> {
    let domain = bumps[0].domain().clone();
    let generators = bumps
        .iter()
        .enumerate()
        .map(|(i, f)| Generator {
            name: format!("f{}", i + 1),
            map: f.clone(),
        })
        .collect();
    Ok(GroupSpec::new("pre_chain", domain, generators)?.with_metadata(Metadata {
        notes: vec!["pre-chain group; coherent when minimal".into()],
        ..Metadata::default()
    }))
}
