//! Seeded random generators for terms, walks and cells. Everything here is
//! deterministic given the `ChaCha8Rng` seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lambda::{apply_step, find_redexes, normalize, shift, Dir, RedStep, StepKind, Term};
use crate::front_seed::{Cell2Word, Gen, Letter};
use crate::tower::{Context, Homotopy2, Homotopy3, RedSeq};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A term with at most `size` nodes over `nfree` free variables. Redex shapes
/// are favoured so that reduction has something to do.
pub fn term<R: Rng>(rng: &mut R, size: usize, nfree: usize) -> Term {
    fn go<R: Rng>(rng: &mut R, size: usize, bound: usize) -> Term {
        let scope = bound.max(1);
        if size <= 1 {
            return Term::var(rng.gen_range(0..scope));
        }
        if size == 2 {
            return Term::lam(go(rng, 1, bound + 1));
        }
        match rng.gen_range(0..10) {
            0..=2 => Term::lam(go(rng, size - 1, bound + 1)),
            3..=4 if size >= 4 => {
                // β-redex: (λ body) arg
                let body = rng.gen_range(1..=size - 3);
                let arg = rng.gen_range(1..=size - 2 - body);
                Term::app(Term::lam(go(rng, body, bound + 1)), go(rng, arg, bound))
            }
            5 if size >= 4 => {
                // η-redex shape: λ (f #0)
                let f = rng.gen_range(1..=size - 3);
                Term::lam(Term::app(go(rng, f, bound + 1), Term::var(0)))
            }
            _ => {
                let l = rng.gen_range(1..=size - 2);
                let r = rng.gen_range(1..=size - 1 - l);
                Term::app(go(rng, l, bound), go(rng, r, bound))
            }
        }
    }
    let size = rng.gen_range(1..=size.max(1));
    go(rng, size, nfree)
}

/// All paths into `t`, in pre-order.
pub fn paths(t: &Term) -> Vec<Vec<Dir>> {
    fn go(t: &Term, cur: &mut Vec<Dir>, out: &mut Vec<Vec<Dir>>) {
        out.push(cur.clone());
        match t {
            Term::Var(_) => {}
            Term::App(f, a) => {
                cur.push(Dir::Fun);
                go(f, cur, out);
                cur.pop();
                cur.push(Dir::Arg);
                go(a, cur, out);
                cur.pop();
            }
            Term::Lam(b) => {
                cur.push(Dir::Body);
                go(b, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// `λ (shift(1,0,x) #0)`, which η-contracts to `x`.
pub fn eta_expand(x: &Term) -> Term {
    Term::lam(Term::app(shift(1, 0, x).expect("upward shift"), Term::var(0)))
}

/// `(λ shift(1,0,x)) y`, which β-contracts to `x`.
pub fn beta_expand(x: &Term, y: Term) -> Term {
    Term::app(Term::lam(shift(1, 0, x).expect("upward shift")), y)
}

/// A random inverse step at a random position of `t`.
pub fn expansion<R: Rng>(rng: &mut R, t: &Term) -> RedStep {
    let ps = paths(t);
    let path = ps.choose(rng).unwrap().clone();
    let sub = t.subterm(&path).unwrap();
    if rng.gen_bool(0.5) {
        RedStep::inverse(StepKind::Eta, path, eta_expand(sub))
    } else {
        RedStep::inverse(StepKind::Beta, path, beta_expand(sub, Term::var(rng.gen_range(0..3))))
    }
}

const MAX_WALK_TERM: usize = 40;

/// A zigzag of `len` steps from `source`: forward contractions, backtracking
/// and fresh expansions.
pub fn walk<R: Rng>(rng: &mut R, source: &Term, len: usize) -> RedSeq {
    let mut steps = Vec::with_capacity(len);
    let mut history: Vec<Term> = vec![source.clone()];
    let mut cur = source.clone();
    for _ in 0..len {
        let forward = find_redexes(&cur);
        let choice = rng.gen_range(0..10);
        let step = if choice < 5 && !forward.is_empty() {
            forward.choose(rng).unwrap().clone()
        } else if choice < 7 && !steps.is_empty() {
            let prev: &RedStep = steps.last().unwrap();
            prev.reversed(&history[history.len() - 2]).unwrap()
        } else if cur.size() < MAX_WALK_TERM {
            expansion(rng, &cur)
        } else if let Some(s) = forward.choose(rng) {
            s.clone()
        } else {
            break;
        };
        cur = apply_step(&cur, &step).expect("generated steps are valid");
        history.push(cur.clone());
        steps.push(step);
    }
    RedSeq::from_steps(source.clone(), steps).expect("generated steps are valid")
}

/// A walk of random length up to `max_len`.
pub fn any_walk<R: Rng>(rng: &mut R, source: &Term, max_len: usize) -> RedSeq {
    let len = rng.gen_range(0..=max_len);
    walk(rng, source, len)
}

/// `k` composable walks starting at `source`.
pub fn composable<R: Rng>(rng: &mut R, source: &Term, k: usize, max_len: usize) -> Vec<RedSeq> {
    let mut out = Vec::with_capacity(k);
    let mut cur = source.clone();
    for _ in 0..k {
        let p = any_walk(rng, &cur, max_len);
        cur = p.target().clone();
        out.push(p);
    }
    out
}

pub fn context<R: Rng>(rng: &mut R, depth: usize) -> Context {
    if depth == 0 || rng.gen_bool(0.3) {
        return Context::Hole;
    }
    let inner = Box::new(context(rng, depth - 1));
    match rng.gen_range(0..3) {
        0 => Context::AppL(inner, term(rng, 3, 2)),
        1 => Context::AppR(term(rng, 3, 2), inner),
        _ => Context::Lam(inner),
    }
}

/// The context obtained by punching a hole into `t` at `path`.
pub fn context_at(t: &Term, path: &[Dir]) -> Context {
    match (path.split_first(), t) {
        (None, _) => Context::Hole,
        (Some((Dir::Fun, rest)), Term::App(f, a)) => Context::AppL(Box::new(context_at(f, rest)), (**a).clone()),
        (Some((Dir::Arg, rest)), Term::App(f, a)) => Context::AppR((**f).clone(), Box::new(context_at(a, rest))),
        (Some((Dir::Body, rest)), Term::Lam(b)) => Context::Lam(Box::new(context_at(b, rest))),
        _ => panic!("path does not address a subterm"),
    }
}

/// A well-formed 2-cell whose source 1-cell is exactly `p`.
pub fn cell2_from<R: Rng>(rng: &mut R, p: &RedSeq, depth: usize) -> Homotopy2 {
    if depth == 0 {
        return Homotopy2::Refl(p.clone());
    }
    let n = p.len();
    let half = n / 2;
    if n > 0 && n.is_multiple_of(2) && p.suffix(half) == p.prefix(half).invert() && rng.gen_bool(0.7) {
        return Homotopy2::InvL(p.prefix(half));
    }
    match rng.gen_range(0..9) {
        0 => Homotopy2::Refl(p.clone()),
        1 => {
            let i = rng.gen_range(0..=n);
            let j = rng.gen_range(i..=n);
            Homotopy2::Assoc(p.prefix(i), p.suffix(i).prefix(j - i), p.suffix(j))
        }
        2 => Homotopy2::UnitL(p.clone()),
        3 => Homotopy2::UnitR(p.clone()),
        4 => {
            let i = rng.gen_range(0..=n);
            Homotopy2::whisker_l(p.prefix(i), cell2_from(rng, &p.suffix(i), depth - 1))
        }
        5 => {
            let i = rng.gen_range(0..=n);
            Homotopy2::whisker_r(cell2_from(rng, &p.prefix(i), depth - 1), p.suffix(i))
        }
        6 => {
            let i = rng.gen_range(0..=n);
            Homotopy2::hcomp(cell2_from(rng, &p.prefix(i), depth - 1), cell2_from(rng, &p.suffix(i), depth - 1))
        }
        7 => {
            let a = cell2_from(rng, p, depth - 1);
            let mid = a.target().expect("generated cells are well formed");
            a.trans(cell2_from(rng, &mid, depth - 1))
        }
        _ => {
            if p.is_empty() {
                let x = any_walk(rng, p.source(), 3);
                if rng.gen_bool(0.5) {
                    Homotopy2::InvL(x).symm()
                } else {
                    let back = x.invert();
                    Homotopy2::InvR(back).symm()
                }
            } else {
                cell2_from(rng, p, depth - 1).symm().symm()
            }
        }
    }
}

/// A well-formed 2-cell between 1-cells starting at `source`.
pub fn cell2_at<R: Rng>(rng: &mut R, source: &Term, depth: usize) -> Homotopy2 {
    match rng.gen_range(0..6) {
        0 => {
            let x = any_walk(rng, source, 3);
            if rng.gen_bool(0.5) {
                Homotopy2::InvL(x)
            } else {
                // x⁻¹ · x must start at `source`, so x ends there
                Homotopy2::InvR(any_walk(rng, source, 3).invert())
            }
        }
        1 if depth > 0 => {
            let ps = paths(source);
            let path = ps.choose(rng).unwrap();
            let c = context_at(source, path);
            let a = cell2_at(rng, source.subterm(path).unwrap(), depth - 1);
            Homotopy2::StepCong(c, Box::new(a))
        }
        _ => {
            let p = any_walk(rng, source, 4);
            cell2_from(rng, &p, depth)
        }
    }
}

/// A well-formed 3-cell whose source 2-cell is exactly `a`.
pub fn cell3_from<R: Rng>(rng: &mut R, a: &Homotopy2, depth: usize) -> Homotopy3 {
    if depth == 0 {
        return Homotopy3::Refl3(a.clone());
    }
    match (rng.gen_range(0..5), a) {
        (0, Homotopy2::WhiskerL(p, inner)) => Homotopy3::WhiskerL3(p.clone(), Box::new(cell3_from(rng, inner, depth - 1))),
        (0, Homotopy2::WhiskerR(inner, p)) => Homotopy3::WhiskerR3(Box::new(cell3_from(rng, inner, depth - 1)), p.clone()),
        (0, Homotopy2::HComp(l, r)) => Homotopy3::HComp3(
            Box::new(cell3_from(rng, l, depth - 1)),
            Box::new(cell3_from(rng, r, depth - 1)),
        ),
        (1, _) => {
            let t = cell3_from(rng, a, depth - 1);
            let (_, mid) = t.boundary().expect("generated cells are well formed");
            Homotopy3::Trans3(Box::new(t), Box::new(cell3_from(rng, &mid, depth - 1)))
        }
        (2, _) => Homotopy3::Symm3(Box::new(Homotopy3::Symm3(Box::new(cell3_from(rng, a, depth - 1))))),
        _ => Homotopy3::Refl3(a.clone()),
    }
}

/// A well-formed 3-cell over 1-cells starting at `source`. Every constructor
/// is reachable.
pub fn cell3_at<R: Rng>(rng: &mut R, source: &Term, depth: usize) -> Homotopy3 {
    let d = depth.saturating_sub(1);
    match rng.gen_range(0..9) {
        0 => {
            let q = composable(rng, source, 4, 2);
            Homotopy3::Pentagon(q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone())
        }
        1 => {
            let q = composable(rng, source, 2, 3);
            Homotopy3::Triangle(q[0].clone(), q[1].clone())
        }
        2 => {
            let p = any_walk(rng, source, 2);
            let a = cell2_from(rng, &p, 1);
            let b = cell2_from(rng, &a.target().unwrap(), 1);
            let q = any_walk(rng, p.target(), 2);
            let c = cell2_from(rng, &q, 1);
            let e = cell2_from(rng, &c.target().unwrap(), 1);
            Homotopy3::Interchange(a, b, c, e)
        }
        3 if depth > 0 => {
            let p = any_walk(rng, source, 2);
            Homotopy3::WhiskerL3(p.clone(), Box::new(cell3_at(rng, p.target(), d)))
        }
        4 if depth > 0 => {
            let t = cell3_at(rng, source, d);
            let end = t.boundary().unwrap().0.source().unwrap().target().clone();
            let p = any_walk(rng, &end, 2);
            Homotopy3::WhiskerR3(Box::new(t), p)
        }
        5 if depth > 0 => {
            let t = cell3_at(rng, source, d);
            let end = t.boundary().unwrap().0.source().unwrap().target().clone();
            Homotopy3::HComp3(Box::new(t), Box::new(cell3_at(rng, &end, d)))
        }
        6 if depth > 0 => Homotopy3::Symm3(Box::new(cell3_at(rng, source, d))),
        7 if depth > 0 => {
            let t = cell3_at(rng, source, d);
            let (_, mid) = t.boundary().unwrap();
            Homotopy3::Trans3(Box::new(t), Box::new(cell3_from(rng, &mid, d)))
        }
        _ => {
            let a = cell2_at(rng, source, 2);
            cell3_from(rng, &a, depth)
        }
    }
}

/// A pair `(m, n)` that is βη-convertible, found by reducing `m` partway and
/// then expanding somewhere. Returns `None` if `m` does not normalize quickly.
pub fn convertible_pair<R: Rng>(rng: &mut R, size: usize, fuel: usize) -> Option<(Term, Term)> {
    let m = term(rng, size, 2);
    let (_, trace) = normalize(&m, fuel).ok()?;
    let k = rng.gen_range(0..=trace.len());
    let mut cur = m.clone();
    for s in &trace[..k] {
        cur = apply_step(&cur, s).ok()?;
    }
    let e = expansion(rng, &cur);
    let n = apply_step(&cur, &e).ok()?;
    Some((m, n))
}


/// A composable word of `len` letters, each a loop on the edge `e`.
pub fn loop_word<R: Rng>(rng: &mut R, e: &RedSeq, len: usize, depth: usize) -> Cell2Word {
    Cell2Word((0..len).map(|_| loop_letter(rng, e, depth)).collect())
}

fn split<R: Rng>(rng: &mut R, e: &RedSeq) -> (RedSeq, RedSeq) {
    let k = rng.gen_range(0..=e.len());
    (e.prefix(k), e.suffix(k))
}

fn loop_letter<R: Rng>(rng: &mut R, e: &RedSeq, depth: usize) -> Letter {
    let pick = if depth == 0 { rng.gen_range(0..5) } else { rng.gen_range(0..7) };
    let gen = match pick {
        0 | 1 => Gen::Named(format!("x{}", rng.gen_range(0..3)), e.clone(), e.clone()),
        2 => Gen::Refl(e.clone()),
        3 => {
            let (a, rest) = split(rng, e);
            let (b, c) = split(rng, &rest);
            Gen::Ass(a, b, c)
        }
        4 => {
            let (a, b) = split(rng, e);
            Gen::Cmp(a, b)
        }
        5 => {
            let (a, rest) = split(rng, e);
            let n = rng.gen_range(1..3);
            Gen::Wl(a, loop_word(rng, &rest, n, depth - 1).0)
        }
        _ => {
            let (rest, d) = split(rng, e);
            let n = rng.gen_range(1..3);
            Gen::Wr(loop_word(rng, &rest, n, depth - 1).0, d)
        }
    };
    Letter { gen, inv: rng.gen_bool(0.3) }
}
