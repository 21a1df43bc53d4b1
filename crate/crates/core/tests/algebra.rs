mod common;

use coherent::rational::{int, midpoint, Rational};
use coherent::witness::relations::relator_words;
use coherent::{ExtPoint, PiecewiseMap, Word};
use common::*;
use proptest::prelude::*;

/// Points at which two finite-piece maps agree only if they are equal:
/// three per piece of the common refinement.
fn probe_points(f: &PiecewiseMap, g: &PiecewiseMap) -> Vec<Rational> {
    let mut cuts: Vec<Rational> = f.breakpoints().into_iter().chain(g.breakpoints()).collect();
    let d = f.domain();
    if let ExtPoint::Finite(a) = d.inf() {
        cuts.push(a);
    }
    if let ExtPoint::Finite(b) = d.sup() {
        cuts.push(b);
    }
    cuts.sort();
    cuts.dedup();
    let mut out = cuts.clone();
    out.extend(cuts.windows(2).map(|w| midpoint(&w[0], &w[1])));
    let lo = cuts.first().cloned().unwrap_or_else(|| int(0));
    let hi = cuts.last().cloned().unwrap_or_else(|| int(0));
    if !d.inf().is_finite() {
        out.extend((1..=3).map(|k| &lo - int(k)));
    }
    if !d.sup().is_finite() {
        out.extend((1..=3).map(|k| &hi + int(k)));
    }
    out
}

fn same_function(f: &PiecewiseMap, g: &PiecewiseMap) -> bool {
    probe_points(f, g).iter().all(|x| f.apply(x) == g.apply(x))
}

fn sorted_points(spec: &coherent::GroupSpec, fr: &[(i64, i64)]) -> Vec<Rational> {
    let mut xs: Vec<Rational> = fr.iter().map(|&(n, d)| interior(&spec.domain, n, d)).collect();
    xs.sort();
    xs.dedup();
    xs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_evaluates_in_order(
        key in prop::sample::select(GROUPS),
        w1 in letters(6), w2 in letters(6), fr in prop::collection::vec(fraction(), 1..8),
    ) {
        let spec = group(key);
        let f = spec.evaluate(&word(&spec, &w1)).unwrap();
        let g = spec.evaluate(&word(&spec, &w2)).unwrap();
        let fg = f.compose(&g).unwrap();
        for x in sorted_points(&spec, &fr) {
            prop_assert_eq!(fg.apply(&x), g.apply(&f.apply(&x).unwrap()));
        }
    }

    #[test]
    fn inverses_cancel(key in prop::sample::select(GROUPS), w in letters(8)) {
        let spec = group(key);
        let f = spec.evaluate(&word(&spec, &w)).unwrap();
        prop_assert!(f.compose(&f.inverse()).unwrap().is_identity());
        prop_assert!(f.inverse().compose(&f).unwrap().is_identity());
    }

    #[test]
    fn strictly_increasing(
        key in prop::sample::select(GROUPS), w in letters(8), fr in prop::collection::vec(fraction(), 2..10),
    ) {
        let spec = group(key);
        let f = spec.evaluate(&word(&spec, &w)).unwrap();
        let xs = sorted_points(&spec, &fr);
        let ys: Vec<Rational> = xs.iter().map(|x| f.apply(x).unwrap()).collect();
        prop_assert!(ys.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn composition_associates(
        key in prop::sample::select(GROUPS),
        w1 in letters(4), w2 in letters(4), w3 in letters(4), fr in prop::collection::vec(fraction(), 1..8),
    ) {
        let spec = group(key);
        let [f, g, h] = [&w1, &w2, &w3].map(|w| spec.evaluate(&word(&spec, w)).unwrap());
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        for x in sorted_points(&spec, &fr) {
            prop_assert_eq!(left.apply(&x), right.apply(&x));
        }
    }

    #[test]
    fn canonical_form_is_idempotent(key in prop::sample::select(GROUPS), w in letters(8)) {
        let spec = group(key);
        let f = spec.evaluate(&word(&spec, &w)).unwrap();
        let again = PiecewiseMap::canonicalize(f.domain().clone(), f.pieces().to_vec()).unwrap();
        prop_assert_eq!(again, f);
    }

    #[test]
    fn equal_functions_have_equal_forms(key in prop::sample::select(GROUPS), w1 in letters(5), w2 in letters(5)) {
        let spec = group(key);
        let f = spec.evaluate(&word(&spec, &w1)).unwrap();
        let g = spec.evaluate(&word(&spec, &w2)).unwrap();
        prop_assert_eq!(same_function(&f, &g), f == g);
        // the same element reached along two different words
        let joined = spec.evaluate(&word(&spec, &w1).then(&word(&spec, &w2))).unwrap();
        let stepwise = f.compose(&g).unwrap();
        prop_assert!(same_function(&joined, &stepwise));
        prop_assert_eq!(joined, stepwise);
    }

    #[test]
    fn fixed_set_and_support_partition_the_domain(
        key in prop::sample::select(GROUPS), w in letters(8), fr in prop::collection::vec(fraction(), 1..12),
    ) {
        let spec = group(key);
        let f = spec.evaluate(&word(&spec, &w)).unwrap();
        let fixed = f.fixed_set();
        let support = f.support_components();
        for x in sorted_points(&spec, &fr).into_iter().chain(f.breakpoints()) {
            let in_fixed = fixed.iter().filter(|c| c.contains(&x)).count();
            let in_support = support.iter().filter(|c| c.contains(&x)).count();
            prop_assert_eq!(in_fixed + in_support, 1, "x = {}", x);
            prop_assert_eq!(in_fixed == 1, f.fixes(&x));
        }
        for c in &support {
            let s = c.sample();
            prop_assert!(!f.fixes(&s));
        }
    }
}

#[test]
fn a_relation_of_f_collapses_to_the_identity() {
    let spec = group("f-dyadic");
    let [r1, r2] = relator_words(&Word::parse("x1").unwrap(), &Word::parse("x0 x1^-1").unwrap());
    for r in [r1, r2] {
        assert!(!r.is_empty());
        let f = spec.evaluate(&r).unwrap();
        assert!(same_function(&f, &spec.identity()));
        assert_eq!(f, spec.identity());
    }
}
