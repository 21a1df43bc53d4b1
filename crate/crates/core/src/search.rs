//! Bounded shortlex enumeration of reduced words.
//!
//! Letters are ordered `g0, g0⁻¹, g1, g1⁻¹, …` following the generator order
//! of the spec. Words are visited level by level, and within a level in
//! shortlex order, so the first word satisfying a predicate is the
//! shortlex-least one. Children of a level are computed in parallel in
//! fixed-size chunks and then scanned sequentially, which keeps every
//! result independent of the thread count.
//!
//! With deduplication on, a state (element or tuple of points) is expanded
//! only from the first word reaching it. This never changes which state is
//! found first: any word reaching a state later has a shortlex-smaller twin
//! reaching it earlier.

use std::collections::HashSet;
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pmap::PiecewiseMap;
use crate::point::ExtPoint;
use crate::rational::Rational;
use crate::spec::GroupSpec;
use crate::word::{Letter, Word};

const CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_nodes: usize,
    pub max_length: usize,
}

impl SearchBudget {
    pub fn new(max_nodes: usize, max_length: usize) -> Result<Self> {
        if max_nodes == 0 || max_length == 0 {
            return Err(Error::precondition("budget fields must be positive"));
        }
        Ok(SearchBudget {
            max_nodes,
            max_length,
        })
    }

    fn exhausted(&self, nodes: usize, context: impl Into<String>) -> Error {
        Error::BudgetExhausted {
            nodes,
            max_length: self.max_length,
            context: context.into(),
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 100_000,
            max_length: 12,
        }
    }
}

/// Letter `i` is generator `i / 2`, inverted when `i` is odd.
fn letter_inverse(i: usize) -> usize {
    i ^ 1
}

pub(crate) fn word_from_path(spec: &GroupSpec, path: &[usize]) -> Word {
    Word::from_letters(path.iter().map(|&l| Letter {
        name: spec.generators()[l / 2].name.clone(),
        exp: if l % 2 == 0 { 1 } else { -1 },
    }))
}

/// Generator maps indexed by letter.
pub(crate) fn letter_maps(spec: &GroupSpec) -> Vec<PiecewiseMap> {
    spec.generators()
        .iter()
        .flat_map(|g| [g.map.clone(), g.map.inverse()])
        .collect()
}

pub(crate) enum Outcome<S> {
    Found { path: Vec<usize>, state: S, nodes: usize },
    /// Every reduced word up to the maximal length was examined.
    Complete { nodes: usize },
    /// The node budget ran out first.
    Exhausted { nodes: usize },
}

struct Node<S> {
    id: usize,
    last: Option<usize>,
    state: S,
}

/// Breadth-first shortlex walk; `visit` sees each state with its letter
/// path and returns `true` to stop.
pub(crate) fn bfs<S, F, V>(
    n_letters: usize,
    start: S,
    step: F,
    budget: &SearchBudget,
    dedup: bool,
    mut visit: V,
) -> Outcome<S>
where
    S: Clone + Eq + Hash + Send + Sync,
    F: Fn(&S, usize) -> S + Sync,
    V: FnMut(&S, &[usize]) -> bool,
{
    // arena of (parent, letter) for path reconstruction
    let mut arena: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX)];
    let path_of = |arena: &[(usize, usize)], mut id: usize| {
        let mut p = Vec::new();
        while id != 0 {
            let (parent, letter) = arena[id];
            p.push(letter);
            id = parent;
        }
        p.reverse();
        p
    };
    let mut nodes = 1;
    if visit(&start, &[]) {
        return Outcome::Found {
            path: vec![],
            state: start,
            nodes,
        };
    }
    let mut seen: HashSet<S> = HashSet::new();
    if dedup {
        seen.insert(start.clone());
    }
    let mut frontier = vec![Node {
        id: 0,
        last: None,
        state: start,
    }];
    for _depth in 0..budget.max_length {
        let mut next = Vec::new();
        for chunk in frontier.chunks(CHUNK) {
            let children: Vec<(usize, usize, S)> = chunk
                .par_iter()
                .flat_map_iter(|node| {
                    (0..n_letters)
                        .filter(move |&l| node.last.is_none_or(|last| l != letter_inverse(last)))
                        .map(|l| (node.id, l, step(&node.state, l)))
                        .collect::<Vec<_>>()
                })
                .collect();
            for (parent, letter, state) in children {
                if dedup && seen.contains(&state) {
                    continue;
                }
                nodes += 1;
                if nodes > budget.max_nodes {
                    return Outcome::Exhausted { nodes: nodes - 1 };
                }
                arena.push((parent, letter));
                let id = arena.len() - 1;
                let path = path_of(&arena, id);
                if visit(&state, &path) {
                    return Outcome::Found { path, state, nodes };
                }
                if dedup {
                    seen.insert(state.clone());
                }
                next.push(Node {
                    id,
                    last: Some(letter),
                    state,
                });
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Outcome::Complete { nodes }
}

/// Element of a word. An empty word gives the identity.
pub fn evaluate_word(spec: &GroupSpec, w: &Word) -> Result<PiecewiseMap> {
    spec.evaluate(w)
}

/// Result of a successful search.
#[derive(Debug, Clone)]
pub struct Found<S> {
    pub word: Word,
    pub state: S,
    pub nodes: usize,
}

/// Shortlex-least word whose element satisfies `pred`.
pub fn find_word_satisfying<P>(spec: &GroupSpec, pred: P, budget: &SearchBudget) -> Result<Found<PiecewiseMap>>
where
    P: Fn(&PiecewiseMap) -> bool,
{
    let maps = letter_maps(spec);
    let out = bfs(
        maps.len(),
        spec.identity(),
        |s: &PiecewiseMap, l| s.compose(&maps[l]).expect("shared domain"),
        budget,
        true,
        |s, _| pred(s),
    );
    match out {
        Outcome::Found { path, state, nodes } => {
            let word = word_from_path(spec, &path);
            let replay = spec.evaluate(&word)?;
            if replay != state || !pred(&replay) {
                return Err(Error::Internal(format!("search result `{word}` does not replay")));
            }
            Ok(Found { word, state, nodes })
        }
        Outcome::Complete { nodes } | Outcome::Exhausted { nodes } => {
            Err(budget.exhausted(nodes, "no element satisfies the predicate"))
        }
    }
}

/// Shortlex-least word sending the tuple `points` to a tuple accepted by `pred`.
pub fn find_word_mapping<P>(
    spec: &GroupSpec,
    points: &[Rational],
    pred: P,
    budget: &SearchBudget,
) -> Result<Found<Vec<Rational>>>
where
    P: Fn(&[Rational]) -> bool,
{
    for p in points {
        if !spec.domain.contains(p) {
            return Err(Error::OutOfDomain(crate::rational::fmt_rational(p)));
        }
    }
    let maps = letter_maps(spec);
    let out = bfs(
        maps.len(),
        points.to_vec(),
        |s: &Vec<Rational>, l| {
            s.iter()
                .map(|x| maps[l].apply(x).expect("domain is invariant"))
                .collect()
        },
        budget,
        true,
        |s, _| pred(s),
    );
    match out {
        Outcome::Found { path, state, nodes } => {
            let word = word_from_path(spec, &path);
            let g = spec.evaluate(&word)?;
            let replay: Vec<Rational> = points.iter().map(|x| g.apply(x).expect("in domain")).collect();
            if replay != state || !pred(&replay) {
                return Err(Error::Internal(format!("search result `{word}` does not replay")));
            }
            Ok(Found { word, state, nodes })
        }
        Outcome::Complete { nodes } | Outcome::Exhausted { nodes } => {
            Err(budget.exhausted(nodes, "no word maps the points into the target"))
        }
    }
}

fn in_open(x: &Rational, lo: &ExtPoint, hi: &ExtPoint) -> bool {
    let x = ExtPoint::Finite(x.clone());
    *lo < x && x < *hi
}

/// Shortlex-least word `w` with `x·w` in the open interval `(lo, hi)`.
pub fn find_word_moving(
    spec: &GroupSpec,
    x: &Rational,
    target: (&ExtPoint, &ExtPoint),
    budget: &SearchBudget,
) -> Result<Word> {
    if !spec.domain.contains_interior(x) {
        return Err(Error::precondition(format!(
            "{} is not in the interior of the domain",
            crate::rational::fmt_rational(x)
        )));
    }
    let (lo, hi) = target;
    find_word_mapping(spec, std::slice::from_ref(x), |s| in_open(&s[0], lo, hi), budget).map(|f| f.word)
}

/// Visits the distinct elements of all words of length at most `max_length`,
/// each once with its shortlex-least word. Fails if more than `max_nodes`
/// elements would be visited.
pub fn for_each_element<V>(spec: &GroupSpec, budget: &SearchBudget, mut visit: V) -> Result<usize>
where
    V: FnMut(&Word, &PiecewiseMap),
{
    let maps = letter_maps(spec);
    let out = bfs(
        maps.len(),
        spec.identity(),
        |s: &PiecewiseMap, l| s.compose(&maps[l]).expect("shared domain"),
        budget,
        true,
        |s, path| {
            visit(&word_from_path(spec, path), s);
            false
        },
    );
    match out {
        Outcome::Complete { nodes } => Ok(nodes),
        Outcome::Exhausted { nodes } => Err(budget.exhausted(nodes, "enumeration did not finish")),
        Outcome::Found { .. } => unreachable!("visitor never stops"),
    }
}

/// Visits every reduced word of length at most `max_length` exactly once,
/// without deduplication, in shortlex order.
pub fn for_each_reduced_word<V>(spec: &GroupSpec, budget: &SearchBudget, mut visit: V) -> Result<usize>
where
    V: FnMut(&Word, &PiecewiseMap),
{
    let maps = letter_maps(spec);
    let out = bfs(
        maps.len(),
        spec.identity(),
        |s: &PiecewiseMap, l| s.compose(&maps[l]).expect("shared domain"),
        budget,
        false,
        |s, path| {
            visit(&word_from_path(spec, path), s);
            false
        },
    );
    match out {
        Outcome::Complete { nodes } => Ok(nodes),
        Outcome::Exhausted { nodes } => Err(budget.exhausted(nodes, "enumeration did not finish")),
        Outcome::Found { .. } => unreachable!("visitor never stops"),
    }
}
