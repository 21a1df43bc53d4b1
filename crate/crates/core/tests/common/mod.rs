#![allow(dead_code)]

use coherent::catalog::build_str;
use coherent::rational::{int, rat, Rational};
use coherent::{Domain, ExtPoint, GroupSpec, Letter, Word};
use proptest::prelude::*;

pub const GROUPS: &[&str] = &[
    "f-dyadic",
    "f-projective",
    "f-projective+c",
    "stein:2,3",
    "broken-bs:2",
    "bieri-strebel:2,3/2;6",
    "pre-chain",
];

pub fn group(key: &str) -> GroupSpec {
    build_str(key).unwrap()
}

/// Letters as (generator index, inverted).
pub fn letters(max_len: usize) -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..16, any::<bool>()), 0..=max_len)
}

pub fn word(spec: &GroupSpec, picks: &[(usize, bool)]) -> Word {
    let gens = spec.generators();
    Word::from_letters(picks.iter().map(|&(i, inv)| Letter {
        name: gens[i % gens.len()].name.clone(),
        exp: if inv { -1 } else { 1 },
    }))
}

/// A rational strictly inside the domain, chosen by `(num, den)` with
/// `0 < num < den`.
pub fn interior(domain: &Domain, num: i64, den: i64) -> Rational {
    let t = rat(num, den);
    match (domain.inf(), domain.sup()) {
        (ExtPoint::Finite(a), ExtPoint::Finite(b)) => &a + (&b - &a) * t,
        _ => (t - rat(1, 2)) * int(16),
    }
}

pub fn fraction() -> impl Strategy<Value = (i64, i64)> {
    (2i64..200).prop_flat_map(|den| (1..den, Just(den)))
}
