use omegalam::gen;
use omegalam::lambda::*;
use omegalam::tower::RedSeq;
use proptest::prelude::*;

/// Independent redex finder: walk every position and test the redex shapes
/// directly on the subterm.
fn oracle_redexes(t: &Term) -> Vec<(StepKind, Vec<Dir>)> {
    let mut out = Vec::new();
    for path in gen::paths(t) {
        let s = t.subterm(&path).unwrap();
        if let Term::App(f, _) = s {
            if matches!(**f, Term::Lam(_)) {
                out.push((StepKind::Beta, path.clone()));
            }
        }
        if let Term::Lam(b) = s {
            if let Term::App(f, a) = &**b {
                if **a == Term::Var(0) && !f.has_free(0) {
                    out.push((StepKind::Eta, path.clone()));
                }
            }
        }
    }
    out.sort();
    out
}

fn term_strategy() -> impl Strategy<Value = Term> {
    (any::<u64>(), 1usize..=12, 0usize..3).prop_map(|(seed, size, nfree)| gen::term(&mut gen::rng(seed), size, nfree))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn steps_preserve_normal_forms(t in term_strategy()) {
        if let Ok((nf, _)) = normalize(&t, 2000) {
            for step in find_redexes(&t) {
                let u = apply_step(&t, &step).unwrap();
                if let Ok((nf2, _)) = normalize(&u, 2000) {
                    prop_assert_eq!(&nf, &nf2);
                }
            }
        }
    }

    #[test]
    fn traces_replay(t in term_strategy()) {
        if let Ok((nf, trace)) = normalize(&t, 500) {
            let p = RedSeq::from_steps(t.clone(), trace).unwrap();
            prop_assert_eq!(p.target(), &nf);
            prop_assert!(find_redexes(&nf).is_empty());
        }
    }

    #[test]
    fn redex_finder_is_complete(t in term_strategy()) {
        let mut found: Vec<_> = find_redexes(&t).into_iter().map(|s| (s.kind, s.path)).collect();
        found.sort();
        prop_assert_eq!(found, oracle_redexes(&t));
    }

    #[test]
    fn first_redex_is_first(t in term_strategy()) {
        prop_assert_eq!(first_redex(&t), find_redexes(&t).into_iter().next());
    }

    #[test]
    fn shift_cancels(t in term_strategy(), c in 0usize..3) {
        let up = shift(1, c, &t).unwrap();
        prop_assert_eq!(shift(-1, c, &up).unwrap(), t.clone());
        // substituting into a term that never mentions index 0
        prop_assert_eq!(subst(&shift(1, 0, &t).unwrap(), &Term::var(7)), t);
    }

    #[test]
    fn reversed_steps_undo(t in term_strategy(), seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let mut steps = find_redexes(&t);
        steps.push(gen::expansion(&mut rng, &t));
        for s in steps {
            let u = apply_step(&t, &s).unwrap();
            let back = s.reversed(&t).unwrap();
            prop_assert_eq!(apply_step(&u, &back).unwrap(), t.clone());
        }
    }
}

#[test]
fn span_pair_normalizes_to_target() {
    let m = Term::app(Term::lam(Term::app(Term::var(1), Term::var(0))), Term::var(1));
    let (nf, trace) = normalize(&m, 100).unwrap();
    assert_eq!(nf, Term::app(Term::var(0), Term::var(1)));
    assert_eq!(trace.len(), 1);
    assert_eq!(find_redexes(&m).len(), 2);
}

#[test]
fn omega_runs_out_of_fuel() {
    let w = Term::lam(Term::app(Term::var(0), Term::var(0)));
    let omega = Term::app(w.clone(), w);
    let err = normalize(&omega, 50).unwrap_err();
    assert_eq!(err.trace.len(), 50);
}
