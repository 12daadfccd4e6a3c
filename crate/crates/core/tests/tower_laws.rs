use omegalam::gen;
use omegalam::tower::*;
use proptest::prelude::*;

fn seed_term(seed: u64) -> omegalam::Term {
    gen::term(&mut gen::rng(seed ^ 0x5eed), 6, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let ps = gen::composable(&mut rng, &seed_term(seed), 3, 4);
        let l = ps[0].compose(&ps[1]).unwrap().compose(&ps[2]).unwrap();
        let r = ps[0].compose(&ps[1].compose(&ps[2]).unwrap()).unwrap();
        prop_assert_eq!(&l, &r);
        prop_assert!(l.is_valid());
    }

    #[test]
    fn inversion_is_involutive(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let p = gen::any_walk(&mut rng, &seed_term(seed), 6);
        let inv = p.invert();
        prop_assert!(inv.is_valid());
        prop_assert_eq!(inv.source(), p.target());
        prop_assert_eq!(inv.target(), p.source());
        prop_assert_eq!(inv.invert(), p);
    }

    #[test]
    fn two_cells_are_parallel(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let a = gen::cell2_at(&mut rng, &seed_term(seed), 3);
        let (s, t) = a.boundary().unwrap();
        prop_assert_eq!(s.source(), t.source());
        prop_assert_eq!(s.target(), t.target());
    }

    #[test]
    fn three_cells_are_globular(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let c = gen::cell3_at(&mut rng, &seed_term(seed), 3);
        prop_assert!(globular_check(&c));
    }
}

#[test]
fn mismatched_composition_rejected() {
    let mut rng = gen::rng(3);
    let t = seed_term(3);
    let p = gen::walk(&mut rng, &t, 2);
    let q = RedSeq::empty(omegalam::Term::var(9));
    assert!(matches!(p.compose(&q), Err(TowerError::EndpointMismatch(_))));
}
