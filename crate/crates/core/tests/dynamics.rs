mod common;

use coherent::classify::{group_orbitals, OrbitalKind};
use coherent::dynamics::{density_report, minimality_probe, orbit_sample};
use coherent::interval::Interval;
use coherent::rational::rat;
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbits_grow_and_stay_in_their_orbital(key in prop::sample::select(GROUPS), (n, d) in fraction(), depth in 0usize..5) {
        let spec = group(key);
        let x = interior(&spec.domain, n, d);
        let small = orbit_sample(&spec, &x, depth).unwrap();
        let big = orbit_sample(&spec, &x, depth + 1).unwrap();
        prop_assert!(small.points.iter().all(|p| big.points.binary_search(p).is_ok()));
        let piece = group_orbitals(&spec).into_iter().find(|p| p.contains(&x)).unwrap();
        for p in &big.points {
            match piece.kind {
                OrbitalKind::Orbital => prop_assert!(piece.lo.cmp_rational(p).is_lt() && piece.hi.cmp_rational(p).is_gt()),
                OrbitalKind::Fixed => prop_assert_eq!(p, &x),
            }
        }
    }
}

#[test]
fn orbit_is_independent_of_threads() {
    let spec = group("f-dyadic");
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| orbit_sample(&spec, &rat(1, 3), 9).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn reference_orbit_gap() {
    let spec = group("f-dyadic");
    let sample = orbit_sample(&spec, &rat(1, 3), 12).unwrap();
    assert_eq!(sample.points.len(), 1360);
    let r = density_report(&sample, &Interval::new(rat(1, 8), rat(7, 8)).unwrap());
    assert_eq!(r.max_gap, rat(43, 8192));
}

#[test]
fn dyadic_orbits_look_dense() {
    let spec = group("f-dyadic");
    let p = minimality_probe(&spec, &[rat(1, 3), rat(1, 2), rat(1, 5)], 12, &rat(1, 64)).unwrap();
    assert!(p.passed(), "{p:?}");
}
