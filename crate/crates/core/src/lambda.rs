//! De Bruijn lambda terms, single β/η steps and a leftmost-outermost normalizer.
//!
//! Terms are open: free indices are allowed anywhere. A [`RedStep`] names a
//! redex by a path from the root plus an orientation; inverse steps carry the
//! redex they re-create so that replaying them is deterministic.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(usize),
    App(Box<Term>, Box<Term>),
    Lam(Box<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StepKind {
    Beta,
    Eta,
}

/// Child selector used to address subterms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    Fun,
    Arg,
    Body,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Forward,
    /// Expansion back into `redex`, which must contract to the subterm found
    /// at the step's path.
    Inverse { redex: Term },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RedStep {
    pub kind: StepKind,
    pub path: Vec<Dir>,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LambdaError {
    #[error("shifting index {index} by {delta} would make it negative")]
    NegativeIndex { index: usize, delta: isize },
    #[error("path {path:?} does not address a subterm")]
    BadPath { path: Vec<Dir> },
    #[error("{kind:?} step does not match at {path:?}")]
    InvalidStep { kind: StepKind, path: Vec<Dir> },
    #[error("η-body mentions the bound variable at {path:?}")]
    EtaFreeVarViolation { path: Vec<Dir> },
}

/// Normalization ran out of fuel; `term` is the partially reduced result.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("fuel exhausted after {} steps", trace.len())]
pub struct FuelExhausted {
    pub term: Term,
    pub trace: Vec<RedStep>,
}

impl Term {
    pub fn var(n: usize) -> Term {
        Term::Var(n)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn lam(body: Term) -> Term {
        Term::Lam(Box::new(body))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(b) => 1 + b.size(),
        }
    }

    /// Whether index `k` (relative to this term) occurs free.
    pub fn has_free(&self, k: usize) -> bool {
        match self {
            Term::Var(n) => *n == k,
            Term::App(f, a) => f.has_free(k) || a.has_free(k),
            Term::Lam(b) => b.has_free(k + 1),
        }
    }

    pub fn subterm(&self, path: &[Dir]) -> Option<&Term> {
        let mut cur = self;
        for d in path {
            cur = match (d, cur) {
                (Dir::Fun, Term::App(f, _)) => f,
                (Dir::Arg, Term::App(_, a)) => a,
                (Dir::Body, Term::Lam(b)) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Replaces the subterm at `path` with `f(subterm)`.
    pub fn replace_at<E>(
        &self,
        path: &[Dir],
        f: impl FnOnce(&Term) -> Result<Term, E>,
    ) -> Result<Term, ReplaceError<E>> {
        match path.split_first() {
            None => f(self).map_err(ReplaceError::Inner),
            Some((d, rest)) => match (d, self) {
                (Dir::Fun, Term::App(l, r)) => Ok(Term::App(Box::new(l.replace_at(rest, f)?), r.clone())),
                (Dir::Arg, Term::App(l, r)) => Ok(Term::App(l.clone(), Box::new(r.replace_at(rest, f)?))),
                (Dir::Body, Term::Lam(b)) => Ok(Term::Lam(Box::new(b.replace_at(rest, f)?))),
                _ => Err(ReplaceError::BadPath),
            },
        }
    }
}

pub enum ReplaceError<E> {
    BadPath,
    Inner(E),
}

/// Adds `delta` to every free index `>= cutoff`.
pub fn shift(delta: isize, cutoff: usize, m: &Term) -> Result<Term, LambdaError> {
    match m {
        Term::Var(n) if *n >= cutoff => {
            let moved = *n as isize + delta;
            if moved < 0 || (moved as usize) < cutoff && delta < 0 {
                // moving a free index into the bound range is also a capture
                return Err(LambdaError::NegativeIndex { index: *n, delta });
            }
            Ok(Term::Var(moved as usize))
        }
        Term::Var(n) => Ok(Term::Var(*n)),
        Term::App(f, a) => Ok(Term::app(shift(delta, cutoff, f)?, shift(delta, cutoff, a)?)),
        Term::Lam(b) => Ok(Term::lam(shift(delta, cutoff + 1, b)?)),
    }
}

fn shift_up(by: usize, cutoff: usize, m: &Term) -> Term {
    match m {
        Term::Var(n) if *n >= cutoff => Term::Var(n + by),
        Term::Var(n) => Term::Var(*n),
        Term::App(f, a) => Term::app(shift_up(by, cutoff, f), shift_up(by, cutoff, a)),
        Term::Lam(b) => Term::lam(shift_up(by, cutoff + 1, b)),
    }
}

/// `M[N]`: replaces index 0 of `m` by `n`, decrementing the other free indices.
pub fn subst(m: &Term, n: &Term) -> Term {
    fn go(m: &Term, depth: usize, n: &Term) -> Term {
        match m {
            Term::Var(k) if *k == depth => shift_up(depth, 0, n),
            Term::Var(k) if *k > depth => Term::Var(k - 1),
            Term::Var(k) => Term::Var(*k),
            Term::App(f, a) => Term::app(go(f, depth, n), go(a, depth, n)),
            Term::Lam(b) => Term::lam(go(b, depth + 1, n)),
        }
    }
    go(m, 0, n)
}

/// Contracts `redex` as a root redex of the given kind.
pub fn contract(kind: StepKind, redex: &Term, path: &[Dir]) -> Result<Term, LambdaError> {
    let invalid = || LambdaError::InvalidStep { kind, path: path.to_vec() };
    match kind {
        StepKind::Beta => match redex {
            Term::App(f, a) => match &**f {
                Term::Lam(body) => Ok(subst(body, a)),
                _ => Err(invalid()),
            },
            _ => Err(invalid()),
        },
        StepKind::Eta => match redex {
            Term::Lam(body) => match &**body {
                Term::App(f, a) if **a == Term::Var(0) => {
                    if f.has_free(0) {
                        return Err(LambdaError::EtaFreeVarViolation { path: path.to_vec() });
                    }
                    shift(-1, 0, f)
                }
                _ => Err(invalid()),
            },
            _ => Err(invalid()),
        },
    }
}

fn is_redex(kind: StepKind, t: &Term) -> bool {
    contract(kind, t, &[]).is_ok()
}

impl RedStep {
    pub fn forward(kind: StepKind, path: Vec<Dir>) -> RedStep {
        RedStep { kind, path, orientation: Orientation::Forward }
    }

    pub fn inverse(kind: StepKind, path: Vec<Dir>, redex: Term) -> RedStep {
        RedStep { kind, path, orientation: Orientation::Inverse { redex } }
    }

    pub fn is_forward(&self) -> bool {
        matches!(self.orientation, Orientation::Forward)
    }

    /// The step running the other way, valid on `apply_step(source, self)`.
    /// `source` is the term this step applies to.
    pub fn reversed(&self, source: &Term) -> Result<RedStep, LambdaError> {
        match &self.orientation {
            Orientation::Forward => {
                let redex = source
                    .subterm(&self.path)
                    .ok_or_else(|| LambdaError::BadPath { path: self.path.clone() })?;
                Ok(RedStep::inverse(self.kind, self.path.clone(), redex.clone()))
            }
            Orientation::Inverse { .. } => Ok(RedStep::forward(self.kind, self.path.clone())),
        }
    }

    /// Same step, relocated below `prefix`.
    pub fn under(&self, prefix: &[Dir]) -> RedStep {
        let mut path = prefix.to_vec();
        path.extend_from_slice(&self.path);
        RedStep { kind: self.kind, path, orientation: self.orientation.clone() }
    }
}

impl fmt::Display for RedStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            StepKind::Beta => "β",
            StepKind::Eta => "η",
        };
        let inv = if self.is_forward() { "" } else { "⁻¹" };
        write!(f, "{k}{inv}@")?;
        if self.path.is_empty() {
            return write!(f, "root");
        }
        for d in &self.path {
            f.write_str(match d {
                Dir::Fun => "F",
                Dir::Arg => "A",
                Dir::Body => "B",
            })?;
        }
        Ok(())
    }
}

pub fn apply_step(m: &Term, step: &RedStep) -> Result<Term, LambdaError> {
    let path = &step.path;
    let res = m.replace_at(path, |sub| match &step.orientation {
        Orientation::Forward => contract(step.kind, sub, path),
        Orientation::Inverse { redex } => {
            let contractum = contract(step.kind, redex, path)?;
            if &contractum == sub {
                Ok(redex.clone())
            } else {
                Err(LambdaError::InvalidStep { kind: step.kind, path: path.clone() })
            }
        }
    });
    match res {
        Ok(t) => Ok(t),
        Err(ReplaceError::BadPath) => Err(LambdaError::BadPath { path: path.clone() }),
        Err(ReplaceError::Inner(e)) => Err(e),
    }
}

/// All forward steps valid on `m`, in leftmost-outermost (pre-order) path order.
pub fn find_redexes(m: &Term) -> Vec<RedStep> {
    fn go(t: &Term, path: &mut Vec<Dir>, out: &mut Vec<RedStep>) {
        for kind in [StepKind::Beta, StepKind::Eta] {
            if is_redex(kind, t) {
                out.push(RedStep::forward(kind, path.clone()));
            }
        }
        match t {
            Term::Var(_) => {}
            Term::App(f, a) => {
                path.push(Dir::Fun);
                go(f, path, out);
                path.pop();
                path.push(Dir::Arg);
                go(a, path, out);
                path.pop();
            }
            Term::Lam(b) => {
                path.push(Dir::Body);
                go(b, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(m, &mut Vec::new(), &mut out);
    out
}

/// The first forward step in leftmost-outermost order, if any.
pub fn first_redex(m: &Term) -> Option<RedStep> {
    fn go(t: &Term, path: &mut Vec<Dir>) -> Option<RedStep> {
        for kind in [StepKind::Beta, StepKind::Eta] {
            if is_redex(kind, t) {
                return Some(RedStep::forward(kind, path.clone()));
            }
        }
        match t {
            Term::Var(_) => None,
            Term::App(f, a) => {
                path.push(Dir::Fun);
                if let Some(s) = go(f, path) {
                    return Some(s);
                }
                path.pop();
                path.push(Dir::Arg);
                let r = go(a, path);
                path.pop();
                r
            }
            Term::Lam(b) => {
                path.push(Dir::Body);
                let r = go(b, path);
                path.pop();
                r
            }
        }
    }
    go(m, &mut Vec::new())
}

/// Reduces leftmost-outermost until no redex remains, spending at most
/// `fuel` steps.
pub fn normalize(m: &Term, fuel: usize) -> Result<(Term, Vec<RedStep>), FuelExhausted> {
    let mut cur = m.clone();
    let mut trace = Vec::new();
    loop {
        let Some(step) = first_redex(&cur) else {
            return Ok((cur, trace));
        };
        if trace.len() == fuel {
            return Err(FuelExhausted { term: cur, trace });
        }
        cur = apply_step(&cur, &step).expect("first_redex returns valid steps");
        trace.push(step);
    }
}

/// Prints the raw de Bruijn syntax: `#n`, `\ . e`, juxtaposition.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Term::Var(n) => write!(f, "#{n}"),
                _ => write!(f, "({t})"),
            }
        }
        match self {
            Term::Var(n) => write!(f, "#{n}"),
            Term::Lam(b) => write!(f, "\\ . {b}"),
            Term::App(l, r) => {
                match &**l {
                    Term::Lam(_) => atom(l, f)?,
                    _ => write!(f, "{l}")?,
                }
                f.write_str(" ")?;
                atom(r, f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize) -> Term {
        Term::var(n)
    }

    fn span_m() -> Term {
        Term::app(Term::lam(Term::app(v(1), v(0))), v(1))
    }

    /// Named-variable oracle: terms over string names, converted from de
    /// Bruijn under an explicit context of free names.
    mod named {
        use super::*;

        #[derive(Clone, Debug, PartialEq)]
        pub enum N {
            V(String),
            A(Box<N>, Box<N>),
            L(String, Box<N>),
        }

        pub fn from_db(t: &Term, ctx: &mut Vec<String>, fresh: &mut usize) -> N {
            match t {
                Term::Var(k) => N::V(ctx[ctx.len() - 1 - k].clone()),
                Term::App(a, b) => N::A(Box::new(from_db(a, ctx, fresh)), Box::new(from_db(b, ctx, fresh))),
                Term::Lam(b) => {
                    *fresh += 1;
                    let x = format!("b{fresh}");
                    ctx.push(x.clone());
                    let body = from_db(b, ctx, fresh);
                    ctx.pop();
                    N::L(x, Box::new(body))
                }
            }
        }

        pub fn to_db(t: &N, ctx: &mut Vec<String>) -> Term {
            match t {
                N::V(x) => Term::Var(ctx.len() - 1 - ctx.iter().rposition(|y| y == x).unwrap()),
                N::A(a, b) => Term::app(to_db(a, ctx), to_db(b, ctx)),
                N::L(x, b) => {
                    ctx.push(x.clone());
                    let r = Term::lam(to_db(b, ctx));
                    ctx.pop();
                    r
                }
            }
        }

        /// Binder names are globally fresh, so plain replacement cannot capture.
        pub fn replace(t: &N, x: &str, by: &N) -> N {
            match t {
                N::V(y) if y == x => by.clone(),
                N::V(_) => t.clone(),
                N::A(a, b) => N::A(Box::new(replace(a, x, by)), Box::new(replace(b, x, by))),
                N::L(y, b) => N::L(y.clone(), Box::new(replace(b, x, by))),
            }
        }
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(1, 0, &v(0)).unwrap(), v(1));
        assert_eq!(shift(1, 0, &Term::lam(v(0))).unwrap(), Term::lam(v(0)));
        assert_eq!(shift(-1, 0, &Term::app(v(1), v(2))).unwrap(), Term::app(v(0), v(1)));
        assert!(matches!(shift(-1, 0, &v(0)), Err(LambdaError::NegativeIndex { .. })));
    }

    #[test]
    fn shift_down_matches_named_renaming() {
        // Under free context [.., y, x, z] with z at index 0 unused, dropping z
        // is exactly shift(-1, 0).
        let t = Term::lam(Term::app(Term::app(v(0), v(2)), v(3)));
        let mut ctx = vec!["y".to_string(), "x".to_string(), "z".to_string()];
        let mut fresh = 0;
        let named = named::from_db(&t, &mut ctx, &mut fresh);
        let mut smaller = vec!["y".to_string(), "x".to_string()];
        assert_eq!(named::to_db(&named, &mut smaller), shift(-1, 0, &t).unwrap());
    }

    #[test]
    fn subst_examples() {
        assert_eq!(subst(&v(0), &v(7)), v(7));
        assert_eq!(subst(&Term::app(v(1), v(0)), &v(1)), Term::app(v(0), v(1)));
        assert_eq!(subst(&Term::lam(v(0)), &v(3)), Term::lam(v(0)));
    }

    #[test]
    fn subst_matches_named_oracle() {
        // M = λw. z x w, with z bound at index 0 of the outer context.
        let cases = [
            (Term::lam(Term::app(Term::app(v(1), v(2)), v(0))), Term::lam(Term::app(v(0), v(2)))),
            (Term::app(v(1), v(0)), v(1)),
            (Term::app(Term::lam(Term::app(v(1), v(3))), v(0)), Term::app(v(0), v(1))),
        ];
        for (m, n) in cases {
            // free context for m: [y, x, z] (z is index 0); for n: [y, x].
            let mut fresh = 0;
            let mut ctx_m = vec!["y".into(), "x".into(), "z".into()];
            let nm = named::from_db(&m, &mut ctx_m, &mut fresh);
            let mut ctx_n = vec!["y".into(), "x".into()];
            let nn = named::from_db(&n, &mut ctx_n, &mut fresh);
            let replaced = named::replace(&nm, "z", &nn);
            let mut ctx = vec!["y".into(), "x".into()];
            assert_eq!(named::to_db(&replaced, &mut ctx), subst(&m, &n), "{m} [{n}]");
        }
    }

    #[test]
    fn apply_step_span() {
        let m = span_m();
        let n = Term::app(v(0), v(1));
        assert_eq!(apply_step(&m, &RedStep::forward(StepKind::Beta, vec![])).unwrap(), n);
        let eta_body = Term::lam(Term::app(v(1), v(0)));
        assert_eq!(apply_step(&eta_body, &RedStep::forward(StepKind::Eta, vec![])).unwrap(), v(0));
        assert_eq!(apply_step(&m, &RedStep::forward(StepKind::Eta, vec![Dir::Fun])).unwrap(), n);
        let inv = RedStep::inverse(StepKind::Beta, vec![], m.clone());
        assert_eq!(apply_step(&n, &inv).unwrap(), m);
    }

    #[test]
    fn apply_step_errors() {
        let bad = RedStep::forward(StepKind::Beta, vec![]);
        assert!(matches!(apply_step(&v(0), &bad), Err(LambdaError::InvalidStep { .. })));
        let omega_eta = Term::lam(Term::app(v(0), v(0)));
        assert!(matches!(
            apply_step(&omega_eta, &RedStep::forward(StepKind::Eta, vec![])),
            Err(LambdaError::EtaFreeVarViolation { .. })
        ));
        assert!(matches!(
            apply_step(&v(0), &RedStep::forward(StepKind::Beta, vec![Dir::Body])),
            Err(LambdaError::BadPath { .. })
        ));
        // inverse whose redex does not contract to the subterm
        let wrong = RedStep::inverse(StepKind::Beta, vec![], span_m());
        assert!(matches!(apply_step(&v(4), &wrong), Err(LambdaError::InvalidStep { .. })));
    }

    #[test]
    fn find_redexes_examples() {
        assert!(find_redexes(&v(3)).is_empty());
        assert_eq!(
            find_redexes(&span_m()),
            vec![RedStep::forward(StepKind::Beta, vec![]), RedStep::forward(StepKind::Eta, vec![Dir::Fun])]
        );
        assert!(find_redexes(&Term::lam(Term::app(v(0), v(0)))).is_empty());
        assert_eq!(first_redex(&span_m()), Some(RedStep::forward(StepKind::Beta, vec![])));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&v(0), 10).unwrap(), (v(0), vec![]));
        let (nf, trace) = normalize(&span_m(), 10).unwrap();
        assert_eq!(nf, Term::app(v(0), v(1)));
        assert_eq!(trace, vec![RedStep::forward(StepKind::Beta, vec![])]);
        let w = Term::lam(Term::app(v(0), v(0)));
        let omega = Term::app(w.clone(), w);
        let err = normalize(&omega, 50).unwrap_err();
        assert_eq!(err.trace.len(), 50);
    }

    #[test]
    fn zero_fuel_on_normal_form_is_fine() {
        assert!(normalize(&v(2), 0).is_ok());
        assert!(normalize(&span_m(), 0).is_err());
    }

    #[test]
    fn display_prints_de_bruijn() {
        assert_eq!(span_m().to_string(), "(\\ . #1 #0) #1");
        assert_eq!(Term::app(Term::app(v(0), v(1)), Term::app(v(2), v(3))).to_string(), "#0 #1 (#2 #3)");
    }
}
