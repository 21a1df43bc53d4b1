mod common;

use coherent::analyze::*;
use coherent::classify::classify_element;
use coherent::rational::rat;
use coherent::search::SearchBudget;
use common::*;

#[test]
fn verdicts_are_monotone_in_depth() {
    let cases = [
        ("stein:2,3", EmbeddingTarget::F),
        ("broken-bs:2", EmbeddingTarget::F),
        ("stein:2,3,5", EmbeddingTarget::Stein { primes: vec![2, 3] }),
        ("f-dyadic", EmbeddingTarget::F),
    ];
    for (key, target) in cases {
        let spec = group(key);
        let mut fired = false;
        for depth in 1..=5 {
            let v = embeddability_verdict(&spec, &target, depth).unwrap();
            assert!(!fired || v.is_not_embeddable(), "{key} flipped back at depth {depth}");
            fired |= v.is_not_embeddable();
            if v.is_not_embeddable() {
                assert!(v.replay(&spec).unwrap(), "{key} evidence does not replay");
            }
        }
    }
}

#[test]
fn expected_verdicts() {
    let v = embeddability_verdict(&group("stein:2,3"), &EmbeddingTarget::F, VERDICT_DEPTH).unwrap();
    assert_eq!(v.criterion(), Some(Criterion::GermRank));
    let v = embeddability_verdict(&group("stein:2,3,5"), &"stein:2,3".parse().unwrap(), VERDICT_DEPTH).unwrap();
    assert_eq!(v.criterion(), Some(Criterion::RankComparison));
    let v = embeddability_verdict(&group("f-dyadic"), &EmbeddingTarget::F, VERDICT_DEPTH).unwrap();
    assert!(!v.is_not_embeddable());
}

#[test]
fn coherence_witnesses_have_their_types() {
    let spec = group("f-dyadic");
    let r = coherence_report(&spec, 12, &rat(1, 64), &SearchBudget::default()).unwrap();
    assert!(r.witnesses_verify(&spec).unwrap());
    let a = spec.evaluate(r.type_a_witness.as_ref().unwrap()).unwrap();
    let b = spec.evaluate(r.type_b_witness.as_ref().unwrap()).unwrap();
    assert_eq!(classify_element(&a).tag(), "type_a");
    assert_eq!(classify_element(&b).tag(), "type_b");
    assert!(matches!(r.overall, Overall::CoherentModuloMinimality));
}
