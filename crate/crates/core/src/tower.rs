//! The explicit low-dimensional tower: reduction sequences as 1-cells and
//! inductively generated 2- and 3-cells with structural boundaries.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lambda::{apply_step, Dir, LambdaError, RedStep, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("ill-formed cell: {0}")]
    IllFormed(String),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
}

/// A finite zigzag of β/η steps. `terms[i]` is the term after `steps[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RedSeq {
    source: Term,
    steps: Vec<RedStep>,
    terms: Vec<Term>,
}

impl RedSeq {
    pub fn empty(source: Term) -> RedSeq {
        RedSeq { source, steps: Vec::new(), terms: Vec::new() }
    }

    /// Replays `steps` from `source`, caching every intermediate term.
    pub fn from_steps(source: Term, steps: Vec<RedStep>) -> Result<RedSeq, LambdaError> {
        let mut terms = Vec::with_capacity(steps.len());
        let mut cur = source.clone();
        for s in &steps {
            cur = apply_step(&cur, s)?;
            terms.push(cur.clone());
        }
        Ok(RedSeq { source, steps, terms })
    }

    pub fn single(source: Term, step: RedStep) -> Result<RedSeq, LambdaError> {
        RedSeq::from_steps(source, vec![step])
    }

    pub fn source(&self) -> &Term {
        &self.source
    }

    pub fn target(&self) -> &Term {
        self.terms.last().unwrap_or(&self.source)
    }

    pub fn steps(&self) -> &[RedStep] {
        &self.steps
    }

    /// Intermediate terms, one per step.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Term before step `i`.
    pub fn term_before(&self, i: usize) -> &Term {
        if i == 0 {
            &self.source
        } else {
            &self.terms[i - 1]
        }
    }

    /// Re-checks the cached terms against a fresh replay.
    pub fn is_valid(&self) -> bool {
        self.steps.len() == self.terms.len()
            && RedSeq::from_steps(self.source.clone(), self.steps.clone()).is_ok_and(|r| r == *self)
    }

    pub fn compose(&self, q: &RedSeq) -> Result<RedSeq, TowerError> {
        if self.target() != q.source() {
            return Err(TowerError::EndpointMismatch(format!(
                "compose: target {} is not source {}",
                self.target(),
                q.source()
            )));
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&q.steps);
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&q.terms);
        Ok(RedSeq { source: self.source.clone(), steps, terms })
    }

    pub fn invert(&self) -> RedSeq {
        let n = self.steps.len();
        let mut steps = Vec::with_capacity(n);
        let mut terms = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let before = self.term_before(i);
            steps.push(self.steps[i].reversed(before).expect("cached step is valid"));
            terms.push(before.clone());
        }
        RedSeq { source: self.target().clone(), steps, terms }
    }

    /// First `k` steps as a sequence.
    pub fn prefix(&self, k: usize) -> RedSeq {
        RedSeq { source: self.source.clone(), steps: self.steps[..k].to_vec(), terms: self.terms[..k].to_vec() }
    }

    /// Steps from `k` on.
    pub fn suffix(&self, k: usize) -> RedSeq {
        RedSeq {
            source: self.term_before(k).clone(),
            steps: self.steps[k..].to_vec(),
            terms: self.terms[k..].to_vec(),
        }
    }
}

/// A one-hole term context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Context {
    Hole,
    /// `C[·] N`
    AppL(Box<Context>, Term),
    /// `M C[·]`
    AppR(Term, Box<Context>),
    Lam(Box<Context>),
}

impl Context {
    pub fn plug(&self, t: &Term) -> Term {
        match self {
            Context::Hole => t.clone(),
            Context::AppL(c, n) => Term::app(c.plug(t), n.clone()),
            Context::AppR(m, c) => Term::app(m.clone(), c.plug(t)),
            Context::Lam(c) => Term::lam(c.plug(t)),
        }
    }

    pub fn path(&self) -> Vec<Dir> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Context::Hole => return out,
                Context::AppL(c, _) => {
                    out.push(Dir::Fun);
                    cur = c;
                }
                Context::AppR(_, c) => {
                    out.push(Dir::Arg);
                    cur = c;
                }
                Context::Lam(c) => {
                    out.push(Dir::Body);
                    cur = c;
                }
            }
        }
    }

    /// Runs `p` inside the hole.
    pub fn lift(&self, p: &RedSeq) -> RedSeq {
        let prefix = self.path();
        RedSeq {
            source: self.plug(&p.source),
            steps: p.steps.iter().map(|s| s.under(&prefix)).collect(),
            terms: p.terms.iter().map(|t| self.plug(t)).collect(),
        }
    }
}

/// 2-cells between parallel reduction sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Homotopy2 {
    Refl(RedSeq),
    Symm(Box<Homotopy2>),
    Trans(Box<Homotopy2>, Box<Homotopy2>),
    /// `p · α`
    WhiskerL(RedSeq, Box<Homotopy2>),
    /// `α · p`
    WhiskerR(Box<Homotopy2>, RedSeq),
    HComp(Box<Homotopy2>, Box<Homotopy2>),
    /// `(p·q)·r ⇒ p·(q·r)`
    Assoc(RedSeq, RedSeq, RedSeq),
    /// `id·p ⇒ p`
    UnitL(RedSeq),
    /// `p·id ⇒ p`
    UnitR(RedSeq),
    /// `p·p⁻¹ ⇒ id`
    InvL(RedSeq),
    /// `p⁻¹·p ⇒ id`
    InvR(RedSeq),
    StepCong(Context, Box<Homotopy2>),
}

/// 3-cells between parallel 2-cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Homotopy3 {
    Refl3(Homotopy2),
    Symm3(Box<Homotopy3>),
    Trans3(Box<Homotopy3>, Box<Homotopy3>),
    WhiskerL3(RedSeq, Box<Homotopy3>),
    WhiskerR3(Box<Homotopy3>, RedSeq),
    HComp3(Box<Homotopy3>, Box<Homotopy3>),
    /// `(α∘β) ⋆ (γ∘δ) ⇛ (α⋆γ) ∘ (β⋆δ)`
    Interchange(Homotopy2, Homotopy2, Homotopy2, Homotopy2),
    Pentagon(RedSeq, RedSeq, RedSeq, RedSeq),
    Triangle(RedSeq, RedSeq),
}

fn cat(p: &RedSeq, q: &RedSeq) -> Result<RedSeq, TowerError> {
    p.compose(q).map_err(|e| TowerError::IllFormed(e.to_string()))
}

fn bx<T>(t: T) -> Box<T> {
    Box::new(t)
}

impl Homotopy2 {
    /// Source and target 1-cells.
    pub fn boundary(&self) -> Result<(RedSeq, RedSeq), TowerError> {
        use Homotopy2::*;
        Ok(match self {
            Refl(p) => (p.clone(), p.clone()),
            Symm(a) => {
                let (s, t) = a.boundary()?;
                (t, s)
            }
            Trans(a, b) => {
                let (s, m1) = a.boundary()?;
                let (m2, t) = b.boundary()?;
                if m1 != m2 {
                    return Err(TowerError::IllFormed("Trans: middle 1-cells differ".into()));
                }
                (s, t)
            }
            WhiskerL(p, a) => {
                let (s, t) = a.boundary()?;
                (cat(p, &s)?, cat(p, &t)?)
            }
            WhiskerR(a, p) => {
                let (s, t) = a.boundary()?;
                (cat(&s, p)?, cat(&t, p)?)
            }
            HComp(a, b) => {
                let (s1, t1) = a.boundary()?;
                let (s2, t2) = b.boundary()?;
                (cat(&s1, &s2)?, cat(&t1, &t2)?)
            }
            Assoc(p, q, r) => (cat(&cat(p, q)?, r)?, cat(p, &cat(q, r)?)?),
            UnitL(p) => (cat(&RedSeq::empty(p.source().clone()), p)?, p.clone()),
            UnitR(p) => (cat(p, &RedSeq::empty(p.target().clone()))?, p.clone()),
            InvL(p) => (cat(p, &p.invert())?, RedSeq::empty(p.source().clone())),
            InvR(p) => (cat(&p.invert(), p)?, RedSeq::empty(p.target().clone())),
            StepCong(c, a) => {
                let (s, t) = a.boundary()?;
                (c.lift(&s), c.lift(&t))
            }
        })
    }

    pub fn source(&self) -> Result<RedSeq, TowerError> {
        Ok(self.boundary()?.0)
    }

    pub fn target(&self) -> Result<RedSeq, TowerError> {
        Ok(self.boundary()?.1)
    }

    pub fn symm(self) -> Homotopy2 {
        Homotopy2::Symm(bx(self))
    }

    pub fn trans(self, other: Homotopy2) -> Homotopy2 {
        Homotopy2::Trans(bx(self), bx(other))
    }

    pub fn whisker_l(p: RedSeq, a: Homotopy2) -> Homotopy2 {
        Homotopy2::WhiskerL(p, bx(a))
    }

    pub fn whisker_r(a: Homotopy2, p: RedSeq) -> Homotopy2 {
        Homotopy2::WhiskerR(bx(a), p)
    }

    pub fn hcomp(a: Homotopy2, b: Homotopy2) -> Homotopy2 {
        Homotopy2::HComp(bx(a), bx(b))
    }

    pub fn size(&self) -> usize {
        use Homotopy2::*;
        match self {
            Refl(_) | Assoc(..) | UnitL(_) | UnitR(_) | InvL(_) | InvR(_) => 1,
            Symm(a) | WhiskerL(_, a) | WhiskerR(a, _) | StepCong(_, a) => 1 + a.size(),
            Trans(a, b) | HComp(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// The two sides of the pentagon for `p, q, r, s`.
pub fn pentagon_sides(p: &RedSeq, q: &RedSeq, r: &RedSeq, s: &RedSeq) -> Result<(Homotopy2, Homotopy2), TowerError> {
    use Homotopy2::*;
    let pq = cat(p, q)?;
    let rs = cat(r, s)?;
    let qr = cat(q, r)?;
    let left = Assoc(pq, r.clone(), s.clone()).trans(Assoc(p.clone(), q.clone(), rs));
    let right = Homotopy2::whisker_r(Assoc(p.clone(), q.clone(), r.clone()), s.clone())
        .trans(Assoc(p.clone(), qr, s.clone()))
        .trans(Homotopy2::whisker_l(p.clone(), Assoc(q.clone(), r.clone(), s.clone())));
    Ok((left, right))
}

/// The two sides of the triangle for `p, q`.
pub fn triangle_sides(p: &RedSeq, q: &RedSeq) -> Result<(Homotopy2, Homotopy2), TowerError> {
    use Homotopy2::*;
    let id = RedSeq::empty(p.target().clone());
    let src = Assoc(p.clone(), id, q.clone()).trans(Homotopy2::whisker_l(p.clone(), UnitL(q.clone())));
    let tgt = Homotopy2::whisker_r(UnitR(p.clone()), q.clone());
    Ok((src, tgt))
}

impl Homotopy3 {
    /// Source and target 2-cells.
    pub fn boundary(&self) -> Result<(Homotopy2, Homotopy2), TowerError> {
        use Homotopy3::*;
        let parallel = |a: &Homotopy2, b: &Homotopy2, what: &str| -> Result<(), TowerError> {
            if a.boundary()? != b.boundary()? {
                return Err(TowerError::IllFormed(format!("{what}: 2-cells not parallel")));
            }
            Ok(())
        };
        let out = match self {
            Refl3(a) => {
                a.boundary()?;
                (a.clone(), a.clone())
            }
            Symm3(t) => {
                let (s, t) = t.boundary()?;
                (t, s)
            }
            Trans3(a, b) => {
                let (s, m1) = a.boundary()?;
                let (m2, t) = b.boundary()?;
                if m1 != m2 {
                    return Err(TowerError::IllFormed("Trans3: middle 2-cells differ".into()));
                }
                (s, t)
            }
            WhiskerL3(p, t) => {
                let (s, t) = t.boundary()?;
                (Homotopy2::whisker_l(p.clone(), s), Homotopy2::whisker_l(p.clone(), t))
            }
            WhiskerR3(t, p) => {
                let (s, t) = t.boundary()?;
                (Homotopy2::whisker_r(s, p.clone()), Homotopy2::whisker_r(t, p.clone()))
            }
            HComp3(a, b) => {
                let (s1, t1) = a.boundary()?;
                let (s2, t2) = b.boundary()?;
                (Homotopy2::hcomp(s1, s2), Homotopy2::hcomp(t1, t2))
            }
            Interchange(a, b, c, d) => (
                Homotopy2::hcomp(a.clone().trans(b.clone()), c.clone().trans(d.clone())),
                Homotopy2::hcomp(a.clone(), c.clone()).trans(Homotopy2::hcomp(b.clone(), d.clone())),
            ),
            Pentagon(p, q, r, s) => pentagon_sides(p, q, r, s)?,
            Triangle(p, q) => triangle_sides(p, q)?,
        };
        parallel(&out.0, &out.1, "boundary")?;
        Ok(out)
    }

    pub fn size(&self) -> usize {
        use Homotopy3::*;
        match self {
            Refl3(_) | Interchange(..) | Pentagon(..) | Triangle(..) => 1,
            Symm3(a) | WhiskerL3(_, a) | WhiskerR3(a, _) => 1 + a.size(),
            Trans3(a, b) | HComp3(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// `s∘s = s∘t` and `t∘s = t∘t`. False on ill-formed cells.
pub fn globular_check(cell: &Homotopy3) -> bool {
    let Ok((s, t)) = cell.boundary() else { return false };
    match (s.boundary(), t.boundary()) {
        (Ok((ss, ts)), Ok((st, tt))) => ss == st && ts == tt,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StructTag {
    Assoc,
    UnitL,
    UnitR,
    Interchange,
    Pentagon,
    Triangle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StructArg {
    Seq(RedSeq),
    Cell(Homotopy2),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cell {
    Two(Homotopy2),
    Three(Homotopy3),
}

fn chain(seqs: &[&RedSeq]) -> Result<(), TowerError> {
    for w in seqs.windows(2) {
        if w[0].target() != w[1].source() {
            return Err(TowerError::EndpointMismatch(format!(
                "{} does not meet {}",
                w[0].target(),
                w[1].source()
            )));
        }
    }
    Ok(())
}

/// Checked constructor for the structural cells.
pub fn mk_structural(tag: StructTag, args: &[StructArg]) -> Result<Cell, TowerError> {
    let seqs = || -> Result<Vec<&RedSeq>, TowerError> {
        args.iter()
            .map(|a| match a {
                StructArg::Seq(p) => Ok(p),
                StructArg::Cell(_) => Err(TowerError::EndpointMismatch("expected a 1-cell argument".into())),
            })
            .collect()
    };
    let arity = |n: usize| -> Result<(), TowerError> {
        if args.len() != n {
            return Err(TowerError::EndpointMismatch(format!("{tag:?} takes {n} arguments, got {}", args.len())));
        }
        Ok(())
    };
    match tag {
        StructTag::Assoc => {
            arity(3)?;
            let s = seqs()?;
            chain(&s)?;
            Ok(Cell::Two(Homotopy2::Assoc(s[0].clone(), s[1].clone(), s[2].clone())))
        }
        StructTag::UnitL | StructTag::UnitR => {
            arity(1)?;
            let p = seqs()?[0].clone();
            Ok(Cell::Two(if tag == StructTag::UnitL { Homotopy2::UnitL(p) } else { Homotopy2::UnitR(p) }))
        }
        StructTag::Pentagon => {
            arity(4)?;
            let s = seqs()?;
            chain(&s)?;
            Ok(Cell::Three(Homotopy3::Pentagon(s[0].clone(), s[1].clone(), s[2].clone(), s[3].clone())))
        }
        StructTag::Triangle => {
            arity(2)?;
            let s = seqs()?;
            chain(&s)?;
            Ok(Cell::Three(Homotopy3::Triangle(s[0].clone(), s[1].clone())))
        }
        StructTag::Interchange => {
            arity(4)?;
            let cells: Vec<&Homotopy2> = args
                .iter()
                .map(|a| match a {
                    StructArg::Cell(c) => Ok(c),
                    StructArg::Seq(_) => Err(TowerError::EndpointMismatch("expected a 2-cell argument".into())),
                })
                .collect::<Result<_, _>>()?;
            let b: Vec<(RedSeq, RedSeq)> = cells
                .iter()
                .map(|c| c.boundary().map_err(|e| TowerError::EndpointMismatch(e.to_string())))
                .collect::<Result<_, _>>()?;
            if b[0].1 != b[1].0 || b[2].1 != b[3].0 {
                return Err(TowerError::EndpointMismatch("interchange: vertical composites do not meet".into()));
            }
            if b[0].0.target() != b[2].0.source() {
                return Err(TowerError::EndpointMismatch("interchange: horizontal composites do not meet".into()));
            }
            let c = |i: usize| cells[i].clone();
            Ok(Cell::Three(Homotopy3::Interchange(c(0), c(1), c(2), c(3))))
        }
    }
}
