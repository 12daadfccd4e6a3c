//! The recursive completion above the explicit core: equality-generated
//! higher derivations, triples `(x, y, h)`, the packaging maps in dimensions
//! 4 to 6, the realization map and the 0-truncation bridge.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lambda::{normalize, Term};
use crate::tower::{Homotopy2, Homotopy3, RedSeq};

pub const DEFAULT_MAX_DIM: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error("Trans: middle endpoints differ")]
    MiddleMismatch,
    #[error("cells at dimension {dim} are not parallel")]
    ParallelismViolation { dim: usize },
    #[error("expected a cell of dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("ill-formed explicit cell: {0}")]
    IllFormed(String),
}

/// Reflexive-symmetric-transitive closure of equality on `X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HigherDeriv<X> {
    Refl(X),
    Symm(Box<HigherDeriv<X>>),
    Trans(Box<HigherDeriv<X>>, Box<HigherDeriv<X>>),
}

impl<X: Clone + PartialEq> HigherDeriv<X> {
    pub fn endpoints(&self) -> Result<(X, X), CompletionError> {
        match self {
            HigherDeriv::Refl(x) => Ok((x.clone(), x.clone())),
            HigherDeriv::Symm(h) => {
                let (a, b) = h.endpoints()?;
                Ok((b, a))
            }
            HigherDeriv::Trans(h1, h2) => {
                let (a, m1) = h1.endpoints()?;
                let (m2, b) = h2.endpoints()?;
                if m1 != m2 {
                    return Err(CompletionError::MiddleMismatch);
                }
                Ok((a, b))
            }
        }
    }
}

impl<X> HigherDeriv<X> {
    /// Functorial action on a map of carriers.
    pub fn map<Y>(&self, f: &impl Fn(&X) -> Y) -> HigherDeriv<Y> {
        match self {
            HigherDeriv::Refl(x) => HigherDeriv::Refl(f(x)),
            HigherDeriv::Symm(h) => HigherDeriv::Symm(Box::new(h.map(f))),
            HigherDeriv::Trans(a, b) => HigherDeriv::Trans(Box::new(a.map(f)), Box::new(b.map(f))),
        }
    }

    pub fn try_map<Y, E>(&self, f: &impl Fn(&X) -> Result<Y, E>) -> Result<HigherDeriv<Y>, E> {
        Ok(match self {
            HigherDeriv::Refl(x) => HigherDeriv::Refl(f(x)?),
            HigherDeriv::Symm(h) => HigherDeriv::Symm(Box::new(h.try_map(f)?)),
            HigherDeriv::Trans(a, b) => HigherDeriv::Trans(Box::new(a.try_map(f)?), Box::new(b.try_map(f)?)),
        })
    }

    pub fn depth(&self) -> usize {
        match self {
            HigherDeriv::Refl(_) => 1,
            HigherDeriv::Symm(h) => 1 + h.depth(),
            HigherDeriv::Trans(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn leaves(&self) -> Vec<&X> {
        match self {
            HigherDeriv::Refl(x) => vec![x],
            HigherDeriv::Symm(h) => h.leaves(),
            HigherDeriv::Trans(a, b) => {
                let mut v = a.leaves();
                v.extend(b.leaves());
                v
            }
        }
    }
}

pub fn hd_map<X, Y>(f: &impl Fn(&X) -> Y, h: &HigherDeriv<X>) -> HigherDeriv<Y> {
    h.map(f)
}

/// A random derivation tree of depth at most `depth` with every leaf `x`.
pub fn random_deriv<X: Clone, R: Rng>(rng: &mut R, x: &X, depth: usize) -> HigherDeriv<X> {
    if depth <= 1 || rng.gen_bool(0.3) {
        return HigherDeriv::Refl(x.clone());
    }
    if rng.gen_bool(0.4) {
        HigherDeriv::Symm(Box::new(random_deriv(rng, x, depth - 1)))
    } else {
        HigherDeriv::Trans(Box::new(random_deriv(rng, x, depth - 1)), Box::new(random_deriv(rng, x, depth - 1)))
    }
}

/// The explicitly represented layers, dimensions 0 to 3.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Explicit {
    Term(Term),
    Seq(RedSeq),
    H2(Homotopy2),
    H3(Homotopy3),
}

impl Explicit {
    pub fn dim(&self) -> usize {
        match self {
            Explicit::Term(_) => 0,
            Explicit::Seq(_) => 1,
            Explicit::H2(_) => 2,
            Explicit::H3(_) => 3,
        }
    }

    /// `None` at dimension 0.
    pub fn boundary(&self) -> Result<Option<(Explicit, Explicit)>, CompletionError> {
        let ill = |e: crate::tower::TowerError| CompletionError::IllFormed(e.to_string());
        Ok(match self {
            Explicit::Term(_) => None,
            Explicit::Seq(p) => Some((Explicit::Term(p.source().clone()), Explicit::Term(p.target().clone()))),
            Explicit::H2(a) => {
                let (s, t) = a.boundary().map_err(ill)?;
                Some((Explicit::Seq(s), Explicit::Seq(t)))
            }
            Explicit::H3(a) => {
                let (s, t) = a.boundary().map_err(ill)?;
                Some((Explicit::H2(s), Explicit::H2(t)))
            }
        })
    }
}

/// A cell of the recursive completion. Above dimension 3 a cell is a triple
/// of parallel lower cells and a derivation between them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RTowerCell {
    Explicit(Explicit),
    Triple { dim: usize, x: Arc<RTowerCell>, y: Arc<RTowerCell>, h: Arc<HigherDeriv<RTowerCell>> },
}

/// A cell of the explicit tower extended by indexed higher derivations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SigmaCell {
    Explicit(Explicit),
    Deriv { dim: usize, src: Arc<SigmaCell>, tgt: Arc<SigmaCell>, deriv: Arc<HigherDeriv<SigmaCell>> },
}

/// Shared shape of the two graded cell types.
pub trait Graded: Clone + PartialEq {
    fn dim(&self) -> usize;
    fn boundary(&self) -> Result<Option<(Self, Self)>, CompletionError>;

    fn parallel(&self, other: &Self) -> Result<bool, CompletionError> {
        Ok(self.dim() == other.dim() && self.boundary()? == other.boundary()?)
    }
}

impl Graded for RTowerCell {
    fn dim(&self) -> usize {
        match self {
            RTowerCell::Explicit(e) => e.dim(),
            RTowerCell::Triple { dim, .. } => *dim,
        }
    }

    fn boundary(&self) -> Result<Option<(Self, Self)>, CompletionError> {
        match self {
            RTowerCell::Explicit(e) => Ok(e.boundary()?.map(|(s, t)| (RTowerCell::Explicit(s), RTowerCell::Explicit(t)))),
            RTowerCell::Triple { x, y, .. } => Ok(Some(((**x).clone(), (**y).clone()))),
        }
    }
}

impl Graded for SigmaCell {
    fn dim(&self) -> usize {
        match self {
            SigmaCell::Explicit(e) => e.dim(),
            SigmaCell::Deriv { dim, .. } => *dim,
        }
    }

    fn boundary(&self) -> Result<Option<(Self, Self)>, CompletionError> {
        match self {
            SigmaCell::Explicit(e) => Ok(e.boundary()?.map(|(s, t)| (SigmaCell::Explicit(s), SigmaCell::Explicit(t)))),
            SigmaCell::Deriv { src, tgt, .. } => Ok(Some(((**src).clone(), (**tgt).clone()))),
        }
    }
}

/// Checks a cell of either grading: parallel endpoints, matching derivation
/// endpoints, consistent dimensions, recursively.
fn validate_triple<C: Graded + Validate>(dim: usize, x: &C, y: &C, h: &HigherDeriv<C>) -> Result<(), CompletionError> {
    if dim < 4 {
        return Err(CompletionError::WrongDimension { expected: 4, got: dim });
    }
    for c in [x, y] {
        if c.dim() != dim - 1 {
            return Err(CompletionError::WrongDimension { expected: dim - 1, got: c.dim() });
        }
    }
    x.validate()?;
    y.validate()?;
    if !x.parallel(y)? {
        return Err(CompletionError::ParallelismViolation { dim });
    }
    let (a, b) = h.endpoints()?;
    if &a != x || &b != y {
        return Err(CompletionError::ParallelismViolation { dim });
    }
    Ok(())
}

pub trait Validate {
    fn validate(&self) -> Result<(), CompletionError>;
}

impl Validate for RTowerCell {
    fn validate(&self) -> Result<(), CompletionError> {
        match self {
            RTowerCell::Explicit(e) => validate_explicit(e),
            RTowerCell::Triple { dim, x, y, h } => validate_triple(*dim, &**x, &**y, h),
        }
    }
}

impl Validate for SigmaCell {
    fn validate(&self) -> Result<(), CompletionError> {
        match self {
            SigmaCell::Explicit(e) => validate_explicit(e),
            SigmaCell::Deriv { dim, src, tgt, deriv } => validate_triple(*dim, &**src, &**tgt, deriv),
        }
    }
}

fn validate_explicit(e: &Explicit) -> Result<(), CompletionError> {
    match e {
        Explicit::Seq(p) if !p.is_valid() => Err(CompletionError::IllFormed("sequence does not replay".into())),
        _ => e.boundary().map(|_| ()),
    }
}

impl RTowerCell {
    pub fn term(t: Term) -> RTowerCell {
        RTowerCell::Explicit(Explicit::Term(t))
    }

    pub fn seq(p: RedSeq) -> RTowerCell {
        RTowerCell::Explicit(Explicit::Seq(p))
    }

    pub fn h2(a: Homotopy2) -> RTowerCell {
        RTowerCell::Explicit(Explicit::H2(a))
    }

    pub fn h3(a: Homotopy3) -> RTowerCell {
        RTowerCell::Explicit(Explicit::H3(a))
    }

    /// The triple one dimension above `x` and `y`, unchecked.
    pub fn triple(x: RTowerCell, y: RTowerCell, h: HigherDeriv<RTowerCell>) -> RTowerCell {
        RTowerCell::Triple { dim: x.dim() + 1, x: Arc::new(x), y: Arc::new(y), h: Arc::new(h) }
    }

    /// `(x, x, Refl x)`.
    pub fn refl(x: RTowerCell) -> RTowerCell {
        let h = HigherDeriv::Refl(x.clone());
        RTowerCell::triple(x.clone(), x, h)
    }

    pub fn source(&self) -> Option<RTowerCell> {
        self.boundary().ok().flatten().map(|b| b.0)
    }

    pub fn target(&self) -> Option<RTowerCell> {
        self.boundary().ok().flatten().map(|b| b.1)
    }
}

impl SigmaCell {
    pub fn source(&self) -> Option<SigmaCell> {
        self.boundary().ok().flatten().map(|b| b.0)
    }

    pub fn target(&self) -> Option<SigmaCell> {
        self.boundary().ok().flatten().map(|b| b.1)
    }
}

/// Packaging map in dimensions 4, 5 and 6.
pub fn pack(d: usize, cell: &RTowerCell) -> Result<SigmaCell, CompletionError> {
    if !(4..=6).contains(&d) {
        return Err(CompletionError::WrongDimension { expected: 4, got: d });
    }
    if cell.dim() != d {
        return Err(CompletionError::WrongDimension { expected: d, got: cell.dim() });
    }
    cell.validate()?;
    Ok(realize_unchecked(cell))
}

/// The realization map: identity through dimension 3, packaging in 4 to 6,
/// and the triple recursion above.
pub fn realize(n: usize, cell: &RTowerCell) -> Result<SigmaCell, CompletionError> {
    if cell.dim() != n {
        return Err(CompletionError::WrongDimension { expected: n, got: cell.dim() });
    }
    cell.validate()?;
    Ok(realize_unchecked(cell))
}

fn realize_unchecked(cell: &RTowerCell) -> SigmaCell {
    match cell {
        RTowerCell::Explicit(e) => SigmaCell::Explicit(e.clone()),
        RTowerCell::Triple { dim, x, y, h } => {
            // x and y typically also appear as derivation leaves; realize them once
            let rx = realize_unchecked(x);
            let ry = if Arc::ptr_eq(x, y) || x == y { rx.clone() } else { realize_unchecked(y) };
            let deriv = h.map(&|c: &RTowerCell| {
                if c == &**x {
                    rx.clone()
                } else if c == &**y {
                    ry.clone()
                } else {
                    realize_unchecked(c)
                }
            });
            SigmaCell::Deriv { dim: *dim, src: Arc::new(rx), tgt: Arc::new(ry), deriv: Arc::new(deriv) }
        }
    }
}

/// Realization commutes with source and target. False on invalid cells.
pub fn realize_boundary_check(n: usize, cell: &RTowerCell) -> bool {
    if n == 0 {
        return false;
    }
    let Ok(r) = realize(n, cell) else { return false };
    let (Ok(Some((rs, rt))), Ok(Some((s, t)))) = (r.boundary(), cell.boundary()) else {
        return false;
    };
    match (realize(n - 1, &s), realize(n - 1, &t)) {
        (Ok(s2), Ok(t2)) => rs == s2 && rt == t2,
        _ => false,
    }
}

/// A random valid cell of dimension `n` rooted in `base`, a 3-cell.
pub fn random_cell<R: Rng>(rng: &mut R, base: &Homotopy3, n: usize, deriv_depth: usize) -> RTowerCell {
    match n {
        0 => RTowerCell::term(base_term(base)),
        1 => RTowerCell::seq(base.boundary().unwrap().0.source().unwrap()),
        2 => RTowerCell::h2(base.boundary().unwrap().0),
        3 => RTowerCell::h3(base.clone()),
        _ => {
            let x = random_cell(rng, base, n - 1, deriv_depth);
            let h = random_deriv(rng, &x, deriv_depth);
            let xa = Arc::new(x);
            RTowerCell::Triple { dim: n, x: xa.clone(), y: xa, h: Arc::new(h) }
        }
    }
}

fn base_term(base: &Homotopy3) -> Term {
    base.boundary().unwrap().0.source().unwrap().source().clone()
}

/// `n`-fold reflexive triple over an explicit cell.
pub fn reflexive_tower(base: RTowerCell, n: usize) -> RTowerCell {
    let mut c = base;
    while c.dim() < n {
        c = RTowerCell::refl(c);
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pi0Result {
    Zigzag(RedSeq),
    NotFound { nf_left: Term, nf_right: Term },
    FuelExhausted,
}

/// Decides convertibility of normalizing terms through their normal forms.
pub fn pi0_equiv(m: &Term, n: &Term, fuel: usize) -> Pi0Result {
    if m == n {
        return Pi0Result::Zigzag(RedSeq::empty(m.clone()));
    }
    let (Ok((nf_m, tm)), Ok((nf_n, tn))) = (normalize(m, fuel), normalize(n, fuel)) else {
        return Pi0Result::FuelExhausted;
    };
    if nf_m != nf_n {
        return Pi0Result::NotFound { nf_left: nf_m, nf_right: nf_n };
    }
    let down = RedSeq::from_steps(m.clone(), tm).expect("normalizer traces replay");
    let up = RedSeq::from_steps(n.clone(), tn).expect("normalizer traces replay").invert();
    Pi0Result::Zigzag(down.compose(&up).expect("both halves meet at the normal form"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::lambda::{RedStep, StepKind};

    fn span_m() -> Term {
        Term::app(Term::lam(Term::app(Term::var(1), Term::var(0))), Term::var(1))
    }

    fn pent() -> Homotopy3 {
        let p = RedSeq::single(span_m(), RedStep::forward(StepKind::Beta, vec![])).unwrap();
        let q = p.invert();
        Homotopy3::Pentagon(p.clone(), q.clone(), p, q)
    }

    #[test]
    fn endpoints_and_mismatch() {
        let h: HigherDeriv<i32> = HigherDeriv::Trans(Box::new(HigherDeriv::Refl(1)), Box::new(HigherDeriv::Refl(1)));
        assert_eq!(h.endpoints().unwrap(), (1, 1));
        let bad: HigherDeriv<i32> = HigherDeriv::Trans(Box::new(HigherDeriv::Refl(1)), Box::new(HigherDeriv::Refl(2)));
        assert_eq!(bad.endpoints(), Err(CompletionError::MiddleMismatch));
        assert_eq!(HigherDeriv::Refl(3).map(&|x: &i32| x * 2), HigherDeriv::Refl(6));
    }

    #[test]
    fn pack4_reflexive() {
        let eta = RTowerCell::h3(pent());
        let t = RTowerCell::refl(eta.clone());
        let SigmaCell::Deriv { dim, src, tgt, deriv } = pack(4, &t).unwrap() else { panic!() };
        assert_eq!(dim, 4);
        let e = SigmaCell::Explicit(Explicit::H3(pent()));
        assert_eq!(*src, e);
        assert_eq!(*tgt, e);
        assert_eq!(*deriv, HigherDeriv::Refl(e));
    }

    #[test]
    fn pack_rejects_non_parallel() {
        let a = Homotopy3::Refl3(Homotopy2::Refl(RedSeq::empty(Term::var(0))));
        let b = Homotopy3::Refl3(Homotopy2::Refl(RedSeq::empty(Term::var(1))));
        let t = RTowerCell::triple(RTowerCell::h3(a.clone()), RTowerCell::h3(b), HigherDeriv::Refl(RTowerCell::h3(a)));
        assert!(matches!(pack(4, &t), Err(CompletionError::ParallelismViolation { .. })));
    }

    #[test]
    fn pack5_respects_boundary() {
        let t4 = RTowerCell::refl(RTowerCell::h3(pent()));
        let t5 = RTowerCell::refl(t4.clone());
        let p5 = pack(5, &t5).unwrap();
        assert_eq!(p5.source().unwrap(), pack(4, &t4).unwrap());
        assert_eq!(p5.target().unwrap(), pack(4, &t4).unwrap());
    }

    #[test]
    fn realize_unfolds_at_seven() {
        let mut r = gen::rng(4);
        let u = random_cell(&mut r, &pent(), 6, 3);
        let h = random_deriv(&mut r, &u, 4);
        let cell = RTowerCell::triple(
            u.clone(),
            u.clone(),
            HigherDeriv::Trans(Box::new(HigherDeriv::Refl(u.clone())), Box::new(h.clone())),
        );
        let ru = realize(6, &u).unwrap();
        let expected = SigmaCell::Deriv {
            dim: 7,
            src: Arc::new(ru.clone()),
            tgt: Arc::new(ru.clone()),
            deriv: Arc::new(HigherDeriv::Trans(
                Box::new(HigherDeriv::Refl(ru)),
                Box::new(h.map(&|c: &RTowerCell| realize(6, c).unwrap())),
            )),
        };
        assert_eq!(realize(7, &cell).unwrap(), expected);
    }

    #[test]
    fn reflexive_towers_commute_with_boundaries() {
        for n in 1..=10 {
            let c = if n <= 3 {
                random_cell(&mut gen::rng(0), &pent(), n, 1)
            } else {
                reflexive_tower(RTowerCell::h3(pent()), n)
            };
            assert!(realize_boundary_check(n, &c), "n = {n}");
        }
    }

    #[test]
    fn corrupted_triple_fails() {
        let x = RTowerCell::refl(RTowerCell::h3(pent()));
        let other = RTowerCell::refl(RTowerCell::h3(Homotopy3::Refl3(Homotopy2::Refl(RedSeq::empty(Term::var(0))))));
        let bad = RTowerCell::triple(x.clone(), x.clone(), HigherDeriv::Refl(other));
        assert!(!realize_boundary_check(5, &bad));
    }

    #[test]
    fn pi0_examples() {
        assert_eq!(pi0_equiv(&Term::var(0), &Term::var(0), 10), Pi0Result::Zigzag(RedSeq::empty(Term::var(0))));
        let n = Term::app(Term::var(0), Term::var(1));
        let Pi0Result::Zigzag(z) = pi0_equiv(&span_m(), &n, 100) else { panic!() };
        assert!(z.is_valid());
        assert_eq!(z.source(), &span_m());
        assert_eq!(z.target(), &n);
        assert!(matches!(pi0_equiv(&Term::var(0), &Term::var(1), 10), Pi0Result::NotFound { .. }));
        let w = Term::lam(Term::app(Term::var(0), Term::var(0)));
        assert_eq!(pi0_equiv(&Term::app(w.clone(), w), &Term::var(0), 50), Pi0Result::FuelExhausted);
    }

    #[test]
    fn serde_round_trip() {
        let c = random_cell(&mut gen::rng(7), &pent(), 5, 3);
        let json = serde_json::to_string(&c).unwrap();
        let back: RTowerCell = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
