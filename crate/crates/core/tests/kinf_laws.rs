use omegalam::domain::{Elem, Kernel};
use omegalam::gen;
use omegalam::kinf::*;
use proptest::prelude::*;
use std::sync::OnceLock;

fn kernel() -> &'static Kernel {
    static K: OnceLock<Kernel> = OnceLock::new();
    K.get_or_init(Kernel::standard)
}

#[test]
fn embeds_are_coherent_retracts() {
    let k = kernel();
    for d in 1..=3 {
        for n in 0..=1.min(d) {
            for u in k.elements(n).unwrap() {
                let t = stage_embed(k, n, &u, d).unwrap();
                t.validate(k).unwrap();
                assert!(k.eq(t.coord(n), &u));
            }
        }
    }
}

#[test]
fn embedding_factors_through_f_plus() {
    let k = kernel();
    for n in 0..=1 {
        for u in k.elements(n).unwrap() {
            let a = stage_embed(k, n + 1, &k.fplus(n, &u), 3).unwrap();
            assert!(thread_eq(k, &a, &stage_embed(k, n, &u, 3).unwrap()));
        }
    }
}

#[test]
fn stagewise_application_at_depth_two() {
    // π_n(app(x, f_{n,∞}(y))) = π_{n+1}(x)(y) for every stage-1 and stage-2 embed x
    let k = kernel();
    let mut xs: Vec<Thread> = k.elements(1).unwrap().iter().map(|u| stage_embed(k, 1, u, 2).unwrap()).collect();
    let mut rng = gen::rng(9);
    xs.extend((0..40).map(|_| stage_embed(k, 2, &random_elem(k, &mut rng, 2), 2).unwrap()));
    for x in &xs {
        for y in k.elements(0).unwrap() {
            let r = app(k, x, &stage_embed(k, 0, &y, 2).unwrap()).unwrap();
            r.validate(k).unwrap();
            assert!(k.eq(r.coord(0), &k.apply(x.coord(1), &y)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shadows_form_a_chain(seed in any::<u64>()) {
        let k = kernel();
        let mut rng = gen::rng(seed);
        let x = stage_embed(k, 2, &random_elem(k, &mut rng, 2), 2).unwrap();
        let y = stage_embed(k, 2, &random_elem(k, &mut rng, 2), 2).unwrap();
        let k0 = app_shadow(k, 0, &x, &y).unwrap();
        let k1 = app_shadow(k, 1, &x, &y).unwrap();
        k0.validate(k).unwrap();
        k1.validate(k).unwrap();
        prop_assert!(thread_leq(k, &k0, &k1));
    }

    #[test]
    fn density_on_depth_two(seed in any::<u64>()) {
        let k = kernel();
        let mut rng = gen::rng(seed);
        let x = stage_embed(k, 2, &random_elem(k, &mut rng, 2), 2).unwrap();
        prop_assert!(density_check(k, &x).unwrap());
    }

    #[test]
    fn reify_is_coherent(seed in any::<u64>()) {
        let k = kernel();
        let mut rng = gen::rng(seed);
        let f = random_elem(k, &mut rng, 2);
        let g = EndoMap::Tabulated { n: 1, f };
        let h = reify(k, &g, 2).unwrap();
        h.validate(k).unwrap();
        let r0 = restrict(k, &g, 0, 2).unwrap();
        let r1 = restrict(k, &g, 1, 2).unwrap();
        prop_assert!(k.eq(&k.fminus(1, &r1), &r0));
    }
}

#[test]
fn retract_law_at_depth_two() {
    let k = kernel();
    let mut rng = gen::rng(5);
    let mut xs: Vec<Elem> = k.elements(1).unwrap().iter().map(|u| k.fplus(1, u)).collect();
    xs.extend((0..50).map(|_| random_elem(k, &mut rng, 2)));
    for u in xs {
        let x = stage_embed(k, 2, &u, 2).unwrap();
        assert!(thread_eq(k, &reify(k, &EndoMap::FromThread(x.clone()), 2).unwrap(), &x));
    }
}
