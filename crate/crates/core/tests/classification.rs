mod common;

use coherent::classify::{classify_element, group_orbitals, ElementType};
use coherent::germ::germ_quotient_image;
use coherent::Point;
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn type_is_invariant_under_conjugation(key in prop::sample::select(GROUPS), w in letters(8), k in letters(6)) {
        let spec = group(key);
        let (w, k) = (word(&spec, &w), word(&spec, &k));
        let f = spec.evaluate(&w).unwrap();
        let g = spec.evaluate(&w.conjugate_by(&k)).unwrap();
        prop_assert_eq!(classify_element(&f).tag(), classify_element(&g).tag());
    }

    #[test]
    fn ray_types_have_one_trivial_end(key in prop::sample::select(GROUPS), w in letters(8)) {
        let spec = group(key);
        let f = spec.evaluate(&word(&spec, &w)).unwrap();
        let (lo, hi) = germ_quotient_image(&f);
        match classify_element(&f) {
            ElementType::TypeA => prop_assert!(!lo.is_trivial() && hi.is_trivial()),
            ElementType::TypeB => prop_assert!(lo.is_trivial() && !hi.is_trivial()),
            ElementType::TypeC { r, s } => {
                prop_assert!(!lo.is_trivial() && !hi.is_trivial());
                prop_assert!(r <= s);
            }
            ElementType::FullySupported => prop_assert!(f.support_components().len() == 1),
            ElementType::CompactlySupported => prop_assert!(lo.is_trivial() && hi.is_trivial()),
            ElementType::Identity => prop_assert!(f.is_identity()),
        }
    }
}

#[test]
fn named_elements() {
    let cases = [
        ("broken-bs:2", "b+", "type_a"),
        ("f-projective", "b", "type_b"),
        ("f-projective", "a", "fully_supported"),
        ("f-projective+c", "c", "compactly_supported"),
        ("f-dyadic", "x1", "type_b"),
    ];
    for (key, w, tag) in cases {
        let spec = group(key);
        let f = spec.evaluate(&coherent::Word::parse(w).unwrap()).unwrap();
        assert_eq!(classify_element(&f).tag(), tag, "{key} {w}");
    }
}

#[test]
fn orbitals_tile_the_domain() {
    for key in coherent::catalog::KEYS {
        let spec = group(key);
        let pieces = group_orbitals(&spec);
        assert_eq!(pieces.first().unwrap().lo, Point::from(spec.domain.inf()), "{key}");
        assert_eq!(pieces.last().unwrap().hi, Point::from(spec.domain.sup()), "{key}");
        for w in pieces.windows(2) {
            assert_eq!(w[0].hi, w[1].lo, "{key}");
            assert_ne!(w[0].kind, w[1].kind, "{key}");
        }
        assert!(pieces.iter().all(|p| p.lo <= p.hi));
    }
}
