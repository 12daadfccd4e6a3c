//! Depth-truncated inverse limit: threads, stage embeddings, application
//! shadows, restriction/reification, and the exact law checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{DomainError, Elem, Kernel, SymFn};

pub const DEFAULT_DEPTH: usize = 3;
pub const MAX_DEPTH: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KinfError {
    #[error("depth {got} is too small (need {need})")]
    DepthTooSmall { need: usize, got: usize },
    #[error("depth {0} is not supported (stages above 3 are not represented)")]
    DepthUnsupported(usize),
    #[error("thread is incoherent at coordinate {n}")]
    Incoherent { n: usize },
    #[error("coordinate {n} has stage {got}")]
    StageMismatch { n: usize, got: usize },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// A coherent tuple `(x₀, …, x_D)` with `f_n⁻(x_{n+1}) = x_n`.
#[derive(Clone, Debug)]
pub struct Thread {
    coords: Vec<Elem>,
}

impl Thread {
    pub fn new(k: &Kernel, coords: Vec<Elem>) -> Result<Thread, KinfError> {
        let t = Thread { coords };
        t.validate(k)?;
        Ok(t)
    }

    pub fn validate(&self, k: &Kernel) -> Result<(), KinfError> {
        if self.coords.len() > MAX_DEPTH + 1 {
            return Err(KinfError::DepthUnsupported(self.coords.len() - 1));
        }
        for (n, c) in self.coords.iter().enumerate() {
            if c.stage() != n {
                return Err(KinfError::StageMismatch { n, got: c.stage() });
            }
        }
        for n in 0..self.depth() {
            if !k.eq(&k.fminus(n, &self.coords[n + 1]), &self.coords[n]) {
                return Err(KinfError::Incoherent { n });
            }
        }
        Ok(())
    }

    /// Builds a thread without checking coherence.
    pub fn unchecked(coords: Vec<Elem>) -> Thread {
        Thread { coords }
    }

    pub fn depth(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coord(&self, n: usize) -> &Elem {
        &self.coords[n]
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn show(&self, k: &Kernel) -> Vec<String> {
        self.coords.iter().map(|c| k.show(c)).collect()
    }
}

pub fn thread_eq(k: &Kernel, x: &Thread, y: &Thread) -> bool {
    x.depth() == y.depth() && x.coords.iter().zip(&y.coords).all(|(a, b)| k.eq(a, b))
}

pub fn thread_leq(k: &Kernel, x: &Thread, y: &Thread) -> bool {
    x.depth() == y.depth() && x.coords.iter().zip(&y.coords).all(|(a, b)| k.leq(a, b))
}

fn check_depth(d: usize) -> Result<(), KinfError> {
    if d > MAX_DEPTH {
        Err(KinfError::DepthUnsupported(d))
    } else {
        Ok(())
    }
}

/// `f_{n,∞}(u)` truncated at depth `d`.
pub fn stage_embed(k: &Kernel, n: usize, u: &Elem, d: usize) -> Result<Thread, KinfError> {
    check_depth(d)?;
    if n > d {
        return Err(KinfError::DepthTooSmall { need: n, got: d });
    }
    if u.stage() != n {
        return Err(KinfError::StageMismatch { n, got: u.stage() });
    }
    let mut coords = vec![u.clone(); d + 1];
    for m in (0..n).rev() {
        coords[m] = k.fminus(m, &coords[m + 1]);
    }
    for m in n..d {
        coords[m + 1] = k.fplus(m, &coords[m]);
    }
    Ok(Thread { coords })
}

pub fn bottom_thread(k: &Kernel, d: usize) -> Result<Thread, KinfError> {
    stage_embed(k, 0, &k.bottom(0), d)
}

/// `k_n(x, y) = f_{n,∞}(π_{n+1}(x)(π_n(y)))`.
pub fn app_shadow(k: &Kernel, n: usize, x: &Thread, y: &Thread) -> Result<Thread, KinfError> {
    if n + 1 > x.depth() {
        return Err(KinfError::DepthTooSmall { need: n + 1, got: x.depth() });
    }
    if n > y.depth() {
        return Err(KinfError::DepthTooSmall { need: n, got: y.depth() });
    }
    let v = k.apply(x.coord(n + 1), y.coord(n));
    stage_embed(k, n, &v, x.depth())
}

/// Application: the top shadow `k_{D−1}`.
pub fn app(k: &Kernel, x: &Thread, y: &Thread) -> Result<Thread, KinfError> {
    if x.depth() < 1 {
        return Err(KinfError::DepthTooSmall { need: 1, got: x.depth() });
    }
    if x.depth() != y.depth() {
        return Err(KinfError::DepthTooSmall { need: x.depth(), got: y.depth() });
    }
    app_shadow(k, x.depth() - 1, x, y)
}

/// Representable endomaps of the truncated limit.
#[derive(Clone, Debug)]
pub enum EndoMap {
    Identity,
    Constant(Thread),
    /// `y ↦ app(x, y)`
    FromThread(Thread),
    /// `y ↦ f_{n,∞}(f(π_n(y)))` for a stage-`(n+1)` element `f`.
    Tabulated { n: usize, f: Elem },
}

impl EndoMap {
    pub fn eval(&self, k: &Kernel, y: &Thread) -> Result<Thread, KinfError> {
        match self {
            EndoMap::Identity => Ok(y.clone()),
            EndoMap::Constant(t) => Ok(t.clone()),
            EndoMap::FromThread(x) => app(k, x, y),
            EndoMap::Tabulated { n, f } => stage_embed(k, *n, &k.apply(f, y.coord(*n)), y.depth()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EndoMap::Identity => "identity",
            EndoMap::Constant(_) => "constant",
            EndoMap::FromThread(_) => "from-thread",
            EndoMap::Tabulated { .. } => "tabulated",
        }
    }
}

/// `r_n(g) = π_n ∘ g ∘ f_{n,∞}`, a stage-`(n+1)` element.
pub fn restrict(k: &Kernel, g: &EndoMap, n: usize, d: usize) -> Result<Elem, KinfError> {
    check_depth(d)?;
    if n + 1 > d {
        return Err(KinfError::DepthTooSmall { need: n + 1, got: d });
    }
    match n {
        0 | 1 => {
            let table = k
                .elements(n)?
                .iter()
                .map(|u| Ok(g.eval(k, &stage_embed(k, n, u, d)?)?.coord(n).clone()))
                .collect::<Result<Vec<_>, KinfError>>()?;
            Ok(k.from_table(n, &table)?)
        }
        _ => {
            let g = g.clone();
            let f = move |k: &Kernel, t: &[u16]| -> Arc<[u16]> {
                let y = stage_embed(k, 2, &Elem::E2(t.into()), d).expect("depth checked");
                match g.eval(k, &y).expect("evaluable endomap").coord(2) {
                    Elem::E2(v) => v.clone(),
                    _ => unreachable!(),
                }
            };
            Ok(Elem::E3(Arc::new(SymFn::Eval { name: "restrict".into(), f: Arc::new(f) })))
        }
    }
}

/// `h(g)₀ = f₀⁻(r₀(g))`, `h(g)_{n+1} = r_n(g)`.
pub fn reify(k: &Kernel, g: &EndoMap, d: usize) -> Result<Thread, KinfError> {
    if d < 1 {
        return Err(KinfError::DepthTooSmall { need: 1, got: d });
    }
    let mut coords = Vec::with_capacity(d + 1);
    let r0 = restrict(k, g, 0, d)?;
    coords.push(k.fminus(0, &r0));
    coords.push(r0);
    for n in 1..d {
        coords.push(restrict(k, g, n, d)?);
    }
    Thread::new(k, coords)
}

/// `a_n(x) = f_{n,∞}(π_n(x))`.
pub fn approx(k: &Kernel, n: usize, x: &Thread) -> Result<Thread, KinfError> {
    stage_embed(k, n, x.coord(n), x.depth())
}

/// Density chain `a₀(x) ≤ … ≤ a_D(x) = x` with each `a_n(x) ≤ x`. Rejects
/// incoherent input.
pub fn density_check(k: &Kernel, x: &Thread) -> Result<bool, KinfError> {
    x.validate(k)?;
    let d = x.depth();
    let a: Vec<Thread> = (0..=d).map(|n| approx(k, n, x)).collect::<Result<_, _>>()?;
    let below = a.iter().all(|an| thread_leq(k, an, x));
    let chain = a.windows(2).all(|w| thread_leq(k, &w[0], &w[1]));
    Ok(below && chain && thread_eq(k, &a[d], x))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LawCheck {
    pub name: String,
    pub pass: bool,
    pub checked: usize,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LawReport {
    pub depth: usize,
    pub base_size: usize,
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LawSamples {
    /// Extra stage-2 embeds used as `x` beyond the stage-1 embeds.
    pub stage2_threads: usize,
    /// Sampled `FromThread`/`Tabulated`/`Constant` maps for the section law.
    pub endomaps: usize,
    /// Threads for the density chain.
    pub density: usize,
}

impl Default for LawSamples {
    fn default() -> Self {
        LawSamples { stage2_threads: 4, endomaps: 12, density: 12 }
    }
}

struct Tally {
    name: &'static str,
    checked: usize,
    counterexample: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally { name, checked: 0, counterexample: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(what());
        }
    }

    fn finish(self) -> LawCheck {
        LawCheck { name: self.name.into(), pass: self.counterexample.is_none(), checked: self.checked, counterexample: self.counterexample }
    }
}

/// A random element of stage `n ≤ 2`.
pub fn random_elem<R: Rng>(k: &Kernel, rng: &mut R, n: usize) -> Elem {
    match n {
        0 => Elem::E0(rng.gen_range(0..k.base().size()) as u16),
        1 => Elem::E1(rng.gen_range(0..k.k1_len()) as u16),
        _ => match k.k2() {
            Some(s) => Elem::E2(s.get(rng.gen_range(0..s.len())).into()),
            None => {
                // join of a few stage-1 step maps, always monotone
                let mut acc = k.bottom(2);
                for _ in 0..3 {
                    let s = k.step_map(1, &random_elem(k, rng, 1), &random_elem(k, rng, 1));
                    if let Some(j) = k.lub(2, &[acc.clone(), s]) {
                        acc = j;
                    }
                }
                acc
            }
        },
    }
}

/// Runs the stagewise application, retract, section and density checks.
pub fn verify_laws<R: Rng>(k: &Kernel, d: usize, samples: LawSamples, rng: &mut R) -> Result<LawReport, KinfError> {
    check_depth(d)?;
    if d < 2 {
        return Err(KinfError::DepthTooSmall { need: 2, got: d });
    }
    let mut xs: Vec<Thread> =
        k.elements(1)?.iter().map(|u| stage_embed(k, 1, u, d)).collect::<Result<_, _>>()?;
    let stage1 = xs.len();
    for _ in 0..samples.stage2_threads {
        xs.push(stage_embed(k, 2, &random_elem(k, rng, 2), d)?);
    }
    let show = |t: &Thread| t.show(k).join(" | ");

    let mut stagewise = Tally::new("stagewise application");
    for n in 0..=d - 2 {
        for x in &xs {
            for y in k.elements(n)? {
                let lhs = app(k, x, &stage_embed(k, n, &y, d)?)?;
                let rhs = k.apply(x.coord(n + 1), &y);
                stagewise.record(k.eq(lhs.coord(n), &rhs), || format!("n={n} x={} y={}", show(x), k.show(&y)));
            }
        }
    }

    let mut retract = Tally::new("retract h(k(x)) = x");
    for x in &xs[..stage1] {
        let back = reify(k, &EndoMap::FromThread(x.clone()), d)?;
        retract.record(thread_eq(k, &back, x), || format!("x={}", show(x)));
    }

    let mut gs = vec![EndoMap::Identity, EndoMap::Constant(bottom_thread(k, d)?)];
    for i in 0..samples.endomaps {
        gs.push(match i % 3 {
            0 => EndoMap::FromThread(xs.choose(rng).expect("nonempty").clone()),
            1 => {
                let n = rng.gen_range(0..2);
                EndoMap::Tabulated { n, f: random_elem(k, rng, n + 1) }
            }
            _ => EndoMap::Constant(stage_embed(k, 1, &random_elem(k, rng, 1), d)?),
        });
    }
    let mut section = Tally::new("section k(h(g)) = g on embedded stages");
    for g in &gs {
        let h = reify(k, g, d)?;
        for n in 0..=1 {
            for y in k.elements(n)? {
                let e = stage_embed(k, n, &y, d)?;
                let lhs = app(k, &h, &e)?;
                let rhs = g.eval(k, &e)?;
                section.record(k.eq(lhs.coord(n), rhs.coord(n)), || format!("g={} n={n} y={}", g.name(), k.show(&y)));
            }
        }
    }

    let mut density = Tally::new("density chain");
    let mut dx: Vec<Thread> = Vec::new();
    for i in 0..samples.density {
        let t = match i % 3 {
            0 => xs.choose(rng).expect("nonempty").clone(),
            1 => app(k, xs.choose(rng).expect("nonempty"), xs.choose(rng).expect("nonempty"))?,
            _ => reify(k, gs.choose(rng).expect("nonempty"), d)?,
        };
        dx.push(t);
    }
    for x in &dx {
        density.record(density_check(k, x)?, || format!("x={}", show(x)));
    }

    let mut shadows = Tally::new("shadow chain monotone");
    for _ in 0..samples.density {
        let (x, y) = (xs.choose(rng).expect("nonempty"), xs.choose(rng).expect("nonempty"));
        let chain: Vec<Thread> = (0..d).map(|n| app_shadow(k, n, x, y)).collect::<Result<_, _>>()?;
        shadows.record(chain.windows(2).all(|w| thread_leq(k, &w[0], &w[1])), || format!("x={} y={}", show(x), show(y)));
    }

    Ok(LawReport {
        depth: d,
        base_size: k.base().size(),
        checks: vec![stagewise.finish(), retract.finish(), section.finish(), density.finish(), shadows.finish()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn k() -> Kernel {
        Kernel::standard()
    }

    #[test]
    fn embeds() {
        let k = k();
        let bot = bottom_thread(&k, 2).unwrap();
        for (n, c) in bot.coords().iter().enumerate() {
            assert!(k.eq(c, &k.bottom(n)));
        }
        let sr = k.pole("sR1").unwrap();
        let t = stage_embed(&k, 0, &sr, 2).unwrap();
        // by hand: (sR1, const sR1, h ↦ const sR1)
        assert_eq!(k.show(t.coord(1)), "[sR1,sR1,sR1]");
        let c = k.fplus(0, &sr);
        let Elem::E1(ci) = c else { unreachable!() };
        let Elem::E2(tab) = t.coord(2) else { unreachable!() };
        assert!(tab.iter().all(|&v| v == ci));
        for u in k.elements(0).unwrap() {
            let a = stage_embed(&k, 1, &k.fplus(0, &u), 2).unwrap();
            assert!(thread_eq(&k, &a, &stage_embed(&k, 0, &u, 2).unwrap()));
        }
        assert!(matches!(stage_embed(&k, 3, &k.bottom(3), 2), Err(KinfError::DepthTooSmall { .. })));
        assert!(matches!(bottom_thread(&k, 4), Err(KinfError::DepthUnsupported(4))));
    }

    #[test]
    fn identity_application() {
        let k = k();
        let id = k.k1_of_table(&[0, 1, 2]).map(Elem::E1).unwrap();
        let x = stage_embed(&k, 1, &id, 3).unwrap();
        for pole in ["sR1", "sL1"] {
            let y = stage_embed(&k, 0, &k.pole(pole).unwrap(), 3).unwrap();
            assert!(thread_eq(&k, &app_shadow(&k, 0, &x, &y).unwrap(), &y));
            assert!(thread_eq(&k, &app(&k, &x, &y).unwrap(), &y));
        }
        let bot = bottom_thread(&k, 3).unwrap();
        let y = stage_embed(&k, 1, &Elem::E1(3), 3).unwrap();
        assert!(thread_eq(&k, &app(&k, &bot, &y).unwrap(), &bot));
        let cb = stage_embed(&k, 1, &k.bottom(1), 3).unwrap();
        assert!(thread_eq(&k, &app_shadow(&k, 0, &cb, &y).unwrap(), &bot));
    }

    #[test]
    fn restrict_and_reify() {
        let k = k();
        let r = restrict(&k, &EndoMap::Identity, 0, 3).unwrap();
        assert_eq!(k.show(&r), "[⊥,sR1,sL1]");
        let bot = bottom_thread(&k, 3).unwrap();
        for n in 0..2 {
            let r = restrict(&k, &EndoMap::Constant(bot.clone()), n, 3).unwrap();
            assert!(k.eq(&r, &k.bottom(n + 1)));
        }
        let h = reify(&k, &EndoMap::Constant(bot.clone()), 3).unwrap();
        assert!(k.eq(h.coord(0), &k.bottom(0)));
        let hid = reify(&k, &EndoMap::Identity, 3).unwrap();
        let Elem::E2(t) = hid.coord(2) else { unreachable!() };
        assert!(t.iter().enumerate().all(|(i, &v)| v as usize == i));
        let x = stage_embed(&k, 1, &Elem::E1(5), 3).unwrap();
        let g = EndoMap::FromThread(x);
        let (r0, r1) = (restrict(&k, &g, 0, 3).unwrap(), restrict(&k, &g, 1, 3).unwrap());
        assert!(k.eq(&k.fminus(1, &r1), &r0));
        assert!(matches!(restrict(&k, &g, 3, 3), Err(KinfError::DepthTooSmall { .. })));
    }

    #[test]
    fn incoherent_rejected() {
        let k = k();
        let sr = k.pole("sR1").unwrap();
        let mut c = stage_embed(&k, 0, &sr, 2).unwrap().coords().to_vec();
        c[0] = k.pole("sL1").unwrap();
        assert!(matches!(Thread::new(&k, c.clone()), Err(KinfError::Incoherent { n: 0 })));
        assert!(density_check(&k, &Thread::unchecked(c)).is_err());
    }

    #[test]
    fn laws_at_depth_two() {
        let k = k();
        let r = verify_laws(&k, 2, LawSamples { stage2_threads: 3, endomaps: 6, density: 6 }, &mut gen::rng(1)).unwrap();
        assert!(r.ok(), "{r:?}");
    }
}
