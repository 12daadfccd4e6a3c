//! Front-seed coherence calculus. Semantic 2-cells are words in the free
//! groupoid on associator, whiskering and comparison generators whose edges
//! are reduction sequences; semantic 3-cells are expressions built from the
//! two seeds with checked boundary words.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tower::{Homotopy2, Homotopy3, RedSeq};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FsError {
    #[error("not composable: {0}")]
    NonComposable(String),
    #[error("ill-formed expression: {0}")]
    IllFormed(String),
    #[error("horn faces {left} and {right} do not glue")]
    HornGlueFailure { left: usize, right: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gen {
    /// Structural associator `(a·b)·c ⇒ a·(b·c)`.
    Ass(RedSeq, RedSeq, RedSeq),
    Wl(RedSeq, Vec<Letter>),
    Wr(Vec<Letter>, RedSeq),
    Refl(RedSeq),
    /// Comparison of the composite `a·b` with its literal concatenation.
    Cmp(RedSeq, RedSeq),
    /// Equality-generated associator coming from literal concatenation.
    EqG(RedSeq, RedSeq, RedSeq),
    /// Semantic image of an explicit 2-cell with no structural reading.
    Syn(Homotopy2),
    Named(String, RedSeq, RedSeq),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: Gen,
    pub inv: bool,
}

/// A word of letters read left to right as vertical composition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell2Word(pub Vec<Letter>);

impl Letter {
    pub fn new(gen: Gen) -> Letter {
        Letter { gen, inv: false }
    }

    pub fn inverse(&self) -> Letter {
        Letter { gen: self.gen.clone(), inv: !self.inv }
    }

    /// Source and target edges; `None` for whiskers around empty words.
    pub fn edges(&self) -> Result<Option<(RedSeq, RedSeq)>, FsError> {
        let e = self.gen.edges()?;
        Ok(if self.inv { e.map(|(s, t)| (t, s)) } else { e })
    }
}

fn cat(p: &RedSeq, q: &RedSeq) -> Result<RedSeq, FsError> {
    p.compose(q).map_err(|e| FsError::NonComposable(e.to_string()))
}

impl Gen {
    pub fn edges(&self) -> Result<Option<(RedSeq, RedSeq)>, FsError> {
        Ok(match self {
            Gen::Ass(a, b, c) | Gen::EqG(a, b, c) => {
                let e = cat(&cat(a, b)?, c)?;
                Some((e.clone(), e))
            }
            Gen::Cmp(a, b) => {
                let e = cat(a, b)?;
                Some((e.clone(), e))
            }
            Gen::Refl(e) => Some((e.clone(), e.clone())),
            Gen::Wl(a, w) => match letters_edges(w)? {
                Some((s, t)) => Some((cat(a, &s)?, cat(a, &t)?)),
                None => None,
            },
            Gen::Wr(w, d) => match letters_edges(w)? {
                Some((s, t)) => Some((cat(&s, d)?, cat(&t, d)?)),
                None => None,
            },
            Gen::Syn(h) => Some(h.boundary().map_err(|e| FsError::IllFormed(e.to_string()))?),
            Gen::Named(_, s, t) => {
                if s.source() != t.source() || s.target() != t.target() {
                    return Err(FsError::NonComposable("named cell between non-parallel edges".into()));
                }
                Some((s.clone(), t.clone()))
            }
        })
    }
}

/// Checks adjacency of known edges and returns the outer edges.
fn letters_edges(w: &[Letter]) -> Result<Option<(RedSeq, RedSeq)>, FsError> {
    let mut first: Option<RedSeq> = None;
    let mut last: Option<RedSeq> = None;
    for (i, l) in w.iter().enumerate() {
        if let Some((s, t)) = l.edges()? {
            if let Some(prev) = &last {
                if prev != &s {
                    return Err(FsError::NonComposable(format!("letter {i} does not follow its predecessor")));
                }
            }
            first.get_or_insert(s);
            last = Some(t);
        }
    }
    Ok(first.zip(last))
}

impl Cell2Word {
    pub fn new(letters: Vec<Letter>) -> Cell2Word {
        Cell2Word(letters)
    }

    pub fn empty() -> Cell2Word {
        Cell2Word(Vec::new())
    }

    pub fn single(g: Gen) -> Cell2Word {
        Cell2Word(vec![Letter::new(g)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn edges(&self) -> Result<Option<(RedSeq, RedSeq)>, FsError> {
        letters_edges(&self.0)
    }

    pub fn inverse(&self) -> Cell2Word {
        Cell2Word(self.0.iter().rev().map(Letter::inverse).collect())
    }

    pub fn concat(&self, other: &Cell2Word) -> Cell2Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Cell2Word(v)
    }
}

/// Free-groupoid normal form after unfolding associators and distributing
/// whiskers.
pub fn word_reduce(w: &Cell2Word) -> Result<Cell2Word, FsError> {
    letters_edges(&w.0)?;
    Ok(Cell2Word(reduce_letters(&w.0)))
}

fn reduce_letters(w: &[Letter]) -> Vec<Letter> {
    let mut raw = Vec::new();
    for l in w {
        expand(l, &mut raw);
    }
    let mut stack: Vec<Letter> = Vec::with_capacity(raw.len());
    for l in raw {
        if stack.last().is_some_and(|top| top.gen == l.gen && top.inv != l.inv) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

/// The associator shell for `p = α·p'`, one head step unfolded.
pub fn shell(p: &RedSeq, q: &RedSeq, r: &RedSeq) -> Cell2Word {
    if p.is_empty() {
        return Cell2Word::empty();
    }
    let alpha = p.prefix(1);
    let tail = p.suffix(1);
    let eta = vec![Letter::new(Gen::Cmp(tail.clone(), q.clone()))];
    let first = Gen::Wr(vec![Letter::new(Gen::Wl(alpha.clone(), eta.clone()))], r.clone());
    let second = Gen::Wl(alpha.clone(), vec![Letter::new(Gen::Wr(eta, r.clone()))]);
    let third = Gen::Wl(alpha, vec![Letter::new(Gen::Ass(tail, q.clone(), r.clone()))]);
    Cell2Word(vec![Letter::new(first), Letter { gen: second, inv: true }, Letter::new(third)])
}

fn expand(l: &Letter, out: &mut Vec<Letter>) {
    if l.inv {
        let start = out.len();
        expand(&Letter::new(l.gen.clone()), out);
        out[start..].reverse();
        for x in &mut out[start..] {
            x.inv = !x.inv;
        }
        return;
    }
    match &l.gen {
        Gen::Refl(_) | Gen::EqG(..) => {}
        Gen::Cmp(a, b) => {
            if !a.is_empty() && !b.is_empty() {
                out.push(l.clone());
            }
        }
        Gen::Ass(p, q, r) => {
            if !p.is_empty() && !q.is_empty() && !r.is_empty() {
                for x in &shell(p, q, r).0 {
                    expand(x, out);
                }
            }
        }
        Gen::Wl(a, w) => {
            for x in reduce_letters(w) {
                out.push(whisker_l(a, x));
            }
        }
        Gen::Wr(w, d) => {
            for x in reduce_letters(w) {
                out.push(whisker_r(x, d));
            }
        }
        Gen::Syn(_) | Gen::Named(..) => out.push(l.clone()),
    }
}

fn whisker_l(a: &RedSeq, x: Letter) -> Letter {
    if a.is_empty() {
        return x;
    }
    let inv = x.inv;
    let gen = match x.gen {
        Gen::Wl(b, inner) => Gen::Wl(a.compose(&b).expect("whisker edges compose"), inner),
        g => Gen::Wl(a.clone(), vec![Letter::new(g)]),
    };
    Letter { gen, inv }
}

fn whisker_r(x: Letter, d: &RedSeq) -> Letter {
    if d.is_empty() {
        return x;
    }
    let inv = x.inv;
    let gen = match x.gen {
        Gen::Wr(inner, c) => Gen::Wr(inner, c.compose(d).expect("whisker edges compose")),
        g => Gen::Wr(vec![Letter::new(g)], d.clone()),
    };
    Letter { gen, inv }
}

/// Semantic reading of an explicit 2-cell as a raw word.
pub fn interpret2(h: &Homotopy2) -> Result<Cell2Word, FsError> {
    let ill = |e: crate::tower::TowerError| FsError::IllFormed(e.to_string());
    Ok(match h {
        Homotopy2::Refl(p) => Cell2Word::single(Gen::Refl(p.clone())),
        Homotopy2::Symm(a) => interpret2(a)?.inverse(),
        Homotopy2::Trans(a, b) => interpret2(a)?.concat(&interpret2(b)?),
        Homotopy2::WhiskerL(p, a) => Cell2Word::single(Gen::Wl(p.clone(), interpret2(a)?.0)),
        Homotopy2::WhiskerR(a, p) => Cell2Word::single(Gen::Wr(interpret2(a)?.0, p.clone())),
        Homotopy2::HComp(a, b) => {
            let (q, _) = b.boundary().map_err(ill)?;
            let (_, p2) = a.boundary().map_err(ill)?;
            Cell2Word(vec![
                Letter::new(Gen::Wr(interpret2(a)?.0, q)),
                Letter::new(Gen::Wl(p2, interpret2(b)?.0)),
            ])
        }
        Homotopy2::Assoc(p, q, r) => Cell2Word::single(Gen::EqG(p.clone(), q.clone(), r.clone())),
        Homotopy2::UnitL(p) | Homotopy2::UnitR(p) => Cell2Word::single(Gen::Refl(p.clone())),
        Homotopy2::InvL(_) | Homotopy2::InvR(_) | Homotopy2::StepCong(..) => {
            h.boundary().map_err(ill)?;
            Cell2Word::single(Gen::Syn(h.clone()))
        }
    })
}

/// Semantic 3-cells over words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cell3Expr {
    /// `wr(wl(α,η),δ) ⇛ ass(α,β,δ) · wl(α,wr(η,δ)) · ass(α,γ,δ)⁻¹`
    Fs1Seed { alpha: RedSeq, eta: Cell2Word, delta: RedSeq },
    /// `p ∗ ass(q,r,s) ⇛ refl`
    Fs2Seed { p: RedSeq, q: RedSeq, r: RedSeq, s: RedSeq },
    VComp(Box<Cell3Expr>, Box<Cell3Expr>),
    Inv(Box<Cell3Expr>),
    Refl3W(Cell2Word),
    /// `left · e · right`
    InContext { left: Cell2Word, e: Box<Cell3Expr>, right: Cell2Word },
    WhiskerL3(RedSeq, Box<Cell3Expr>),
    WhiskerR3(Box<Cell3Expr>, RedSeq),
    /// Interpreted explicit 3-cell.
    Embed(Homotopy3),
    /// Prescribed horn faces, glued in sequence, and the missing face.
    Filler { faces: Vec<Cell3Expr>, missing: (Cell2Word, Cell2Word) },
}

fn reduced(w: &Cell2Word) -> Result<Cell2Word, FsError> {
    word_reduce(w)
}

impl Cell3Expr {
    pub fn vcomp(self, other: Cell3Expr) -> Cell3Expr {
        Cell3Expr::VComp(Box::new(self), Box::new(other))
    }

    pub fn inv(self) -> Cell3Expr {
        Cell3Expr::Inv(Box::new(self))
    }

    pub fn in_context(left: Cell2Word, e: Cell3Expr, right: Cell2Word) -> Cell3Expr {
        Cell3Expr::InContext { left, e: Box::new(e), right }
    }

    /// The unreduced display words of a seed.
    pub fn seed_display(&self) -> Option<(Cell2Word, Cell2Word)> {
        match self {
            Cell3Expr::Fs1Seed { alpha, eta, delta } => {
                let (beta, gamma) = eta.edges().ok().flatten()?;
                Some((
                    Cell2Word::single(Gen::Wr(vec![Letter::new(Gen::Wl(alpha.clone(), eta.0.clone()))], delta.clone())),
                    Cell2Word(vec![
                        Letter::new(Gen::Ass(alpha.clone(), beta, delta.clone())),
                        Letter::new(Gen::Wl(alpha.clone(), vec![Letter::new(Gen::Wr(eta.0.clone(), delta.clone()))])),
                        Letter { gen: Gen::Ass(alpha.clone(), gamma, delta.clone()), inv: true },
                    ]),
                ))
            }
            Cell3Expr::Fs2Seed { p, q, r, s } => Some((
                Cell2Word::single(Gen::Wl(p.clone(), vec![Letter::new(Gen::Ass(q.clone(), r.clone(), s.clone()))])),
                Cell2Word::empty(),
            )),
            _ => None,
        }
    }

    /// Reduced source and target words.
    pub fn boundary_words(&self) -> Result<(Cell2Word, Cell2Word), FsError> {
        match self {
            Cell3Expr::Fs1Seed { alpha, eta, delta } => {
                let Some((beta, _)) = eta.edges()? else {
                    return Err(FsError::NonComposable("FS1: η has no edges".into()));
                };
                if alpha.target() != beta.source() || beta.target() != delta.source() {
                    return Err(FsError::NonComposable("FS1: α, η, δ do not compose".into()));
                }
                let (s, t) = self.seed_display().expect("seed");
                Ok((reduced(&s)?, reduced(&t)?))
            }
            Cell3Expr::Fs2Seed { p, q, r, s } => {
                for (a, b) in [(p, q), (q, r), (r, s)] {
                    if a.target() != b.source() {
                        return Err(FsError::NonComposable("FS2: quadruple does not compose".into()));
                    }
                }
                let (s, t) = self.seed_display().expect("seed");
                Ok((reduced(&s)?, reduced(&t)?))
            }
            Cell3Expr::VComp(a, b) => {
                let (s, m1) = a.boundary_words()?;
                let (m2, t) = b.boundary_words()?;
                if m1 != m2 {
                    return Err(FsError::IllFormed("VComp: middle words differ".into()));
                }
                Ok((s, t))
            }
            Cell3Expr::Inv(e) => {
                let (s, t) = e.boundary_words()?;
                Ok((t, s))
            }
            Cell3Expr::Refl3W(w) => {
                let r = reduced(w)?;
                Ok((r.clone(), r))
            }
            Cell3Expr::InContext { left, e, right } => {
                let (s, t) = e.boundary_words()?;
                Ok((reduced(&left.concat(&s).concat(right))?, reduced(&left.concat(&t).concat(right))?))
            }
            Cell3Expr::WhiskerL3(a, e) => {
                let (s, t) = e.boundary_words()?;
                Ok((
                    reduced(&Cell2Word::single(Gen::Wl(a.clone(), s.0)))?,
                    reduced(&Cell2Word::single(Gen::Wl(a.clone(), t.0)))?,
                ))
            }
            Cell3Expr::WhiskerR3(e, d) => {
                let (s, t) = e.boundary_words()?;
                Ok((
                    reduced(&Cell2Word::single(Gen::Wr(s.0, d.clone())))?,
                    reduced(&Cell2Word::single(Gen::Wr(t.0, d.clone())))?,
                ))
            }
            Cell3Expr::Embed(h) => {
                let (s, t) = h.boundary().map_err(|e| FsError::IllFormed(e.to_string()))?;
                Ok((reduced(&interpret2(&s)?)?, reduced(&interpret2(&t)?)?))
            }
            Cell3Expr::Filler { faces, missing } => {
                check_horn(faces, missing)?;
                Ok((reduced(&missing.0)?, reduced(&missing.1)?))
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Cell3Expr::VComp(a, b) => 1 + a.size() + b.size(),
            Cell3Expr::Inv(e) | Cell3Expr::InContext { e, .. } | Cell3Expr::WhiskerL3(_, e) | Cell3Expr::WhiskerR3(e, _) => {
                1 + e.size()
            }
            Cell3Expr::Filler { faces, .. } => 1 + faces.iter().map(Cell3Expr::size).sum::<usize>(),
            _ => 1,
        }
    }
}

pub fn boundary3_words(e: &Cell3Expr) -> Result<(Cell2Word, Cell2Word), FsError> {
    e.boundary_words()
}

/// Adjacent faces must share their common boundary word, and the chain must
/// run from the missing face's source to its target.
fn check_horn(faces: &[Cell3Expr], missing: &(Cell2Word, Cell2Word)) -> Result<(), FsError> {
    let n = faces.len();
    let bounds: Vec<(Cell2Word, Cell2Word)> = faces
        .iter()
        .enumerate()
        .map(|(i, f)| f.boundary_words().map_err(|_| FsError::HornGlueFailure { left: i, right: i }))
        .collect::<Result<_, _>>()?;
    for i in 1..n {
        if bounds[i - 1].1 != bounds[i].0 {
            return Err(FsError::HornGlueFailure { left: i - 1, right: i });
        }
    }
    let (ms, mt) = (reduced(&missing.0)?, reduced(&missing.1)?);
    match (bounds.first(), bounds.last()) {
        (Some(f), Some(l)) if f.0 == ms && l.1 == mt => Ok(()),
        (None, None) if ms == mt => Ok(()),
        _ => Err(FsError::HornGlueFailure { left: n, right: 0 }),
    }
}

fn chain(seqs: &[&RedSeq]) -> Result<(), FsError> {
    for w in seqs.windows(2) {
        if w[0].target() != w[1].source() {
            return Err(FsError::NonComposable(format!("{} does not meet {}", w[0].target(), w[1].source())));
        }
    }
    Ok(())
}

pub fn seed_fs1(alpha: RedSeq, eta: Cell2Word, delta: RedSeq) -> Result<Cell3Expr, FsError> {
    let e = Cell3Expr::Fs1Seed { alpha, eta, delta };
    e.boundary_words()?;
    Ok(e)
}

pub fn seed_fs2(p: RedSeq, q: RedSeq, r: RedSeq, s: RedSeq) -> Result<Cell3Expr, FsError> {
    let e = Cell3Expr::Fs2Seed { p, q, r, s };
    e.boundary_words()?;
    Ok(e)
}

fn ass(p: &RedSeq, q: &RedSeq, r: &RedSeq) -> Letter {
    Letter::new(Gen::Ass(p.clone(), q.clone(), r.clone()))
}

/// Comparison from the structural associator shell of `(p, q, r)` to the
/// equality-generated one, by recursion on the steps of `p`.
pub fn fs_assoc_compare(p: &RedSeq, q: &RedSeq, r: &RedSeq) -> Result<Cell3Expr, FsError> {
    chain(&[p, q, r])?;
    Ok(assoc_compare(p, q, r))
}

fn assoc_compare(p: &RedSeq, q: &RedSeq, r: &RedSeq) -> Cell3Expr {
    if p.is_empty() {
        return Cell3Expr::Refl3W(Cell2Word::empty());
    }
    let alpha = p.prefix(1);
    let tail = p.suffix(1);
    let eta = Cell2Word::single(Gen::Cmp(tail.clone(), q.clone()));
    let y = Letter::new(Gen::Wl(alpha.clone(), vec![Letter::new(Gen::Wr(eta.0.clone(), r.clone()))]));
    let rest = Letter::new(Gen::Wl(alpha.clone(), vec![ass(&tail, q, r)]));
    let head = Cell3Expr::in_context(
        Cell2Word::empty(),
        Cell3Expr::Fs1Seed { alpha: alpha.clone(), eta, delta: r.clone() },
        Cell2Word(vec![y.inverse(), rest]),
    );
    head.vcomp(Cell3Expr::WhiskerL3(alpha, Box::new(assoc_compare(&tail, q, r))))
}

/// `L = ass(p·q,r,s) · ass(p,q,r·s)`
pub fn pentagon_l(p: &RedSeq, q: &RedSeq, r: &RedSeq, s: &RedSeq) -> Result<Cell2Word, FsError> {
    Ok(Cell2Word(vec![ass(&cat(p, q)?, r, s), ass(p, q, &cat(r, s)?)]))
}

/// `R = (ass(p,q,r) ∗ s) · ass(p,q·r,s) · (p ∗ ass(q,r,s))`
pub fn pentagon_r(p: &RedSeq, q: &RedSeq, r: &RedSeq, s: &RedSeq) -> Result<Cell2Word, FsError> {
    Ok(Cell2Word(vec![
        Letter::new(Gen::Wr(vec![ass(p, q, r)], s.clone())),
        ass(p, &cat(q, r)?, s),
        Letter::new(Gen::Wl(p.clone(), vec![ass(q, r, s)])),
    ]))
}

/// `R` with the whisker-by-`s` factor tagged as equality-generated.
pub fn mixed_target_shell(p: &RedSeq, q: &RedSeq, r: &RedSeq, s: &RedSeq) -> Result<Cell2Word, FsError> {
    let mut w = pentagon_r(p, q, r, s)?;
    w.0[0] = Letter::new(Gen::Wr(vec![Letter::new(Gen::EqG(p.clone(), q.clone(), r.clone()))], s.clone()));
    Ok(w)
}

fn source_bridge(p: &RedSeq, q: &RedSeq, r: &RedSeq, s: &RedSeq) -> Result<Cell3Expr, FsError> {
    let pq = cat(p, q)?;
    let rs = cat(r, s)?;
    Ok(Cell3Expr::in_context(
        Cell2Word::empty(),
        assoc_compare(&pq, r, s),
        Cell2Word(vec![ass(p, q, &rs)]),
    )
    .vcomp(assoc_compare(p, q, &rs)))
}

/// The structural pentagon horn and its filler.
pub fn fs_pentagon(p: &RedSeq, q: &RedSeq, r: &RedSeq, s: &RedSeq) -> Result<Cell3Expr, FsError> {
    chain(&[p, q, r, s])?;
    let qr = cat(q, r)?;
    let w3 = Cell2Word::single(Gen::Wl(p.clone(), vec![ass(q, r, s)]));
    let a2 = Cell2Word(vec![ass(p, &qr, s)]);
    let faces = vec![
        source_bridge(p, q, r, s)?,
        seed_fs2(p.clone(), q.clone(), r.clone(), s.clone())?.inv(),
        Cell3Expr::in_context(Cell2Word::empty(), assoc_compare(p, &qr, s), w3.clone()).inv(),
        Cell3Expr::in_context(
            Cell2Word::empty(),
            Cell3Expr::WhiskerR3(Box::new(assoc_compare(p, q, r)), s.clone()),
            a2.concat(&w3),
        )
        .inv(),
    ];
    let missing = (pentagon_l(p, q, r, s)?, pentagon_r(p, q, r, s)?);
    check_horn(&faces, &missing)?;
    Ok(Cell3Expr::Filler { faces, missing })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bridges {
    pub source_bridge: Cell3Expr,
    pub target_bridge: Cell3Expr,
    pub shell_bridge: Cell3Expr,
}

pub fn fs_bridges(
    p: &RedSeq,
    q: &RedSeq,
    r: &RedSeq,
    s: &RedSeq,
    syntactic_pentagon: &Homotopy3,
) -> Result<Bridges, FsError> {
    chain(&[p, q, r, s])?;
    if syntactic_pentagon != &Homotopy3::Pentagon(p.clone(), q.clone(), r.clone(), s.clone()) {
        return Err(FsError::NonComposable("syntactic pentagon is not on the given quadruple".into()));
    }
    let qr = cat(q, r)?;
    let mixed = mixed_target_shell(p, q, r, s)?;
    let eq_factor = Cell2Word(vec![mixed.0[0].clone()]);
    let w3 = Cell2Word(vec![mixed.0[2].clone()]);
    let source = source_bridge(p, q, r, s)?;
    let target = Cell3Expr::in_context(eq_factor.clone(), assoc_compare(p, &qr, s), w3)
        .vcomp(Cell3Expr::in_context(
            eq_factor.clone(),
            Cell3Expr::WhiskerL3(p.clone(), Box::new(assoc_compare(q, r, s))),
            Cell2Word::empty(),
        ))
        .vcomp(Cell3Expr::Refl3W(eq_factor));
    let shell = source
        .clone()
        .vcomp(Cell3Expr::Embed(syntactic_pentagon.clone()).vcomp(target.clone().inv()));
    for e in [&source, &target, &shell] {
        e.boundary_words()?;
    }
    Ok(Bridges { source_bridge: source, target_bridge: target, shell_bridge: shell })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::{Dir, RedStep, StepKind, Term};

    fn span_m() -> Term {
        Term::app(Term::lam(Term::app(Term::var(1), Term::var(0))), Term::var(1))
    }

    fn t_beta() -> RedSeq {
        RedSeq::single(span_m(), RedStep::forward(StepKind::Beta, vec![])).unwrap()
    }

    fn t_eta() -> RedSeq {
        RedSeq::single(span_m(), RedStep::forward(StepKind::Eta, vec![Dir::Fun])).unwrap()
    }

    /// `b, b⁻¹·b·b⁻¹, b, b⁻¹`: a composable quadruple with a long second leg.
    fn quad() -> (RedSeq, RedSeq, RedSeq, RedSeq) {
        let b = t_beta();
        let back = b.invert();
        let q = back.compose(&b).unwrap().compose(&back).unwrap();
        (b.clone(), q, b, back)
    }

    fn named(n: &str, e: &RedSeq) -> Letter {
        Letter::new(Gen::Named(n.into(), e.clone(), e.clone()))
    }

    #[test]
    fn refl_and_cancellation() {
        let e = t_beta();
        assert!(word_reduce(&Cell2Word::single(Gen::Refl(e.clone()))).unwrap().is_empty());
        let n = RedSeq::empty(e.target().clone());
        let a = ass(&e, &n, &n);
        let w = Cell2Word(vec![a.clone(), a.inverse()]);
        assert!(word_reduce(&w).unwrap().is_empty());
        let x = named("x", &e);
        let w = Cell2Word(vec![x.clone(), named("y", &e), named("y", &e).inverse(), x.inverse(), x.clone()]);
        assert_eq!(word_reduce(&w).unwrap(), Cell2Word(vec![x]));
    }

    #[test]
    fn non_composable_words() {
        let w = Cell2Word(vec![named("x", &t_beta()), named("y", &t_eta())]);
        assert!(matches!(word_reduce(&w), Err(FsError::NonComposable(_))));
    }

    #[test]
    fn whiskers_merge_and_distribute() {
        let b = t_beta();
        let back = b.invert();
        let m = RedSeq::empty(span_m());
        let x = Letter::new(Gen::Named("x".into(), m.clone(), m.clone()));
        // wl(b, wl(back, x)) = wl(b·back, x)
        let nested = Cell2Word::single(Gen::Wl(b.clone(), vec![Letter::new(Gen::Wl(back.clone(), vec![x.clone()]))]));
        let flat = Cell2Word::single(Gen::Wl(b.compose(&back).unwrap(), vec![x.clone()]));
        assert_eq!(word_reduce(&nested).unwrap(), word_reduce(&flat).unwrap());
        // wl(a, [x, x⁻¹]) vanishes; wl(∅, x) = x
        let gone = Cell2Word::single(Gen::Wl(back.clone(), vec![x.clone(), x.inverse()]));
        assert!(word_reduce(&gone).unwrap().is_empty());
        assert_eq!(word_reduce(&Cell2Word::single(Gen::Wl(m.clone(), vec![x.clone()]))).unwrap(), Cell2Word(vec![x.clone()]));
        // mixed nesting stays distinct
        let wlwr = Cell2Word::single(Gen::Wl(back.clone(), vec![Letter::new(Gen::Wr(vec![x.clone()], b.clone()))]));
        let wrwl = Cell2Word::single(Gen::Wr(vec![Letter::new(Gen::Wl(back.clone(), vec![x.clone()]))], b.clone()));
        assert_ne!(word_reduce(&wlwr).unwrap(), word_reduce(&wrwl).unwrap());
    }

    #[test]
    fn fs1_display_and_errors() {
        let a = t_beta().compose(&t_beta().invert()).unwrap().compose(&t_beta()).unwrap();
        let tail = a.suffix(1);
        let q = t_beta().invert();
        let eta = Cell2Word::single(Gen::Cmp(tail.clone(), q.clone()));
        let alpha = a.prefix(1);
        let seed = seed_fs1(alpha.clone(), eta.clone(), t_eta()).unwrap();
        let (s, t) = seed.seed_display().unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(t.len(), 3);
        assert_eq!(seed.boundary_words().unwrap(), (word_reduce(&s).unwrap(), word_reduce(&t).unwrap()));
        assert!(matches!(seed_fs1(alpha, eta.clone(), t_beta().invert()), Err(FsError::NonComposable(_))));
        assert!(matches!(seed_fs1(t_beta().invert(), eta, t_eta()), Err(FsError::NonComposable(_))));
    }

    #[test]
    fn fs2_target_is_reflexive() {
        let (p, q, r, s) = quad();
        let seed = seed_fs2(p, q, r, s).unwrap();
        let (s, t) = seed.boundary_words().unwrap();
        assert!(t.is_empty());
        assert!(!s.is_empty());
    }

    #[test]
    fn assoc_compare_boundaries() {
        let b = t_beta();
        let e = RedSeq::empty(span_m());
        let c = fs_assoc_compare(&e, &b, &b.invert()).unwrap();
        assert_eq!(c, Cell3Expr::Refl3W(Cell2Word::empty()));
        for p in [b.clone(), b.compose(&b.invert()).unwrap().compose(&b).unwrap()] {
            let q = p.invert();
            let r = t_eta();
            let c = fs_assoc_compare(&p, &q, &r).unwrap();
            let (s, t) = c.boundary_words().unwrap();
            assert_eq!(s, word_reduce(&Cell2Word(vec![ass(&p, &q, &r)])).unwrap());
            assert!(t.is_empty());
        }
    }

    #[test]
    fn pentagon_on_span() {
        let b = t_beta();
        let q = b.invert();
        let f = fs_pentagon(&b, &q, &b, &q).unwrap();
        let (s, t) = f.boundary_words().unwrap();
        assert_eq!(s, word_reduce(&pentagon_l(&b, &q, &b, &q).unwrap()).unwrap());
        assert_eq!(t, word_reduce(&pentagon_r(&b, &q, &b, &q).unwrap()).unwrap());
        assert!(!s.is_empty());
        let e = RedSeq::empty(span_m());
        let f = fs_pentagon(&e, &e, &e, &e).unwrap();
        let (s, t) = f.boundary_words().unwrap();
        assert!(s.is_empty() && t.is_empty());
    }

    #[test]
    fn corrupted_face_fails_to_glue() {
        let (p, q, r, s) = quad();
        let Cell3Expr::Filler { mut faces, missing } = fs_pentagon(&p, &q, &r, &s).unwrap() else { panic!() };
        faces[1] = Cell3Expr::Refl3W(Cell2Word::empty());
        let bad = Cell3Expr::Filler { faces, missing };
        assert!(matches!(bad.boundary_words(), Err(FsError::HornGlueFailure { .. })));
    }

    #[test]
    fn bridges_on_span() {
        let b = t_beta();
        let q = b.invert();
        let pent = Homotopy3::Pentagon(b.clone(), q.clone(), b.clone(), q.clone());
        let br = fs_bridges(&b, &q, &b, &q, &pent).unwrap();
        let l = word_reduce(&pentagon_l(&b, &q, &b, &q).unwrap()).unwrap();
        let mixed = word_reduce(&mixed_target_shell(&b, &q, &b, &q).unwrap()).unwrap();
        assert_eq!(br.shell_bridge.boundary_words().unwrap(), (l.clone(), mixed.clone()));
        assert_eq!(br.source_bridge.boundary_words().unwrap(), (l, Cell2Word::empty()));
        assert_eq!(br.target_bridge.boundary_words().unwrap(), (mixed, Cell2Word::empty()));
        let wrong = Homotopy3::Pentagon(q.clone(), b.clone(), q.clone(), b.clone());
        assert!(matches!(fs_bridges(&b, &q, &b, &q, &wrong), Err(FsError::NonComposable(_))));
    }

    #[test]
    fn serde_round_trip() {
        let b = t_beta();
        let q = b.invert();
        let f = fs_pentagon(&b, &q, &b, &q).unwrap();
        let back: Cell3Expr = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
