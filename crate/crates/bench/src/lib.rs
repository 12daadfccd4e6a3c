//! Fixtures shared by the benchmarks.

use omegalam::{gen, Term};

/// Church numeral `λf x. fⁿ x`.
pub fn church(n: usize) -> Term {
    let mut body = Term::var(0);
    for _ in 0..n {
        body = Term::app(Term::var(1), body);
    }
    Term::lam(Term::lam(body))
}

/// `mul a b` applied to two numerals; normalizes to `church(a * b)`.
pub fn church_mul(a: usize, b: usize) -> Term {
    // λm n f. m (n f)
    let mul = Term::lam(Term::lam(Term::lam(Term::app(Term::var(2), Term::app(Term::var(1), Term::var(0))))));
    Term::app(Term::app(mul, church(a)), church(b))
}

pub fn random_terms(seed: u64, count: usize, size: usize) -> Vec<Term> {
    let mut rng = gen::rng(seed);
    (0..count).map(|_| gen::term(&mut rng, size, 2)).collect()
}
