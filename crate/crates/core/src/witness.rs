//! Fixed-span witnesses `W(M, N)` for `M = (λz. x z) y` and `N = x y`, their
//! tags, interpretation as limit points, and the separation report.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{Kernel, LEFT_POLE, RIGHT_POLE};
use crate::kinf::{stage_embed, KinfError, Thread};
use crate::lambda::{normalize, Term};

pub const EPSILON_FUEL: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpanEndpoint {
    M,
    N,
}

impl SpanEndpoint {
    pub fn term(self) -> Term {
        match self {
            SpanEndpoint::M => span_m(),
            SpanEndpoint::N => span_n(),
        }
    }
}

/// `(λ. #1 #0) #1`
pub fn span_m() -> Term {
    Term::app(Term::lam(Term::app(Term::var(1), Term::var(0))), Term::var(1))
}

/// `#0 #1`
pub fn span_n() -> Term {
    Term::app(Term::var(0), Term::var(1))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Witness {
    TBeta,
    TEta,
    ReflM,
    ReflN,
    Comp(Box<Witness>, Box<Witness>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    Beta,
    Eta,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Beta => "beta",
            Tag::Eta => "eta",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("cannot compose a witness ending at {left:?} with one starting at {right:?}")]
    IllTyped { left: SpanEndpoint, right: SpanEndpoint },
    #[error("witness has type W({0:?}, {1:?}), expected W(M, N)")]
    NotSpan(SpanEndpoint, SpanEndpoint),
    #[error(transparent)]
    Kinf(#[from] KinfError),
}

impl Witness {
    pub fn comp(u: Witness, v: Witness) -> Result<Witness, WitnessError> {
        let (_, b) = u.endpoints()?;
        let (b2, _) = v.endpoints()?;
        if b != b2 {
            return Err(WitnessError::IllTyped { left: b, right: b2 });
        }
        Ok(Witness::Comp(Box::new(u), Box::new(v)))
    }

    pub fn endpoints(&self) -> Result<(SpanEndpoint, SpanEndpoint), WitnessError> {
        use SpanEndpoint::*;
        match self {
            Witness::TBeta | Witness::TEta => Ok((M, N)),
            Witness::ReflM => Ok((M, M)),
            Witness::ReflN => Ok((N, N)),
            Witness::Comp(u, v) => {
                let (a, b) = u.endpoints()?;
                let (b2, c) = v.endpoints()?;
                if b != b2 {
                    return Err(WitnessError::IllTyped { left: b, right: b2 });
                }
                Ok((a, c))
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Witness::Comp(u, v) => 1 + u.size() + v.size(),
            _ => 1,
        }
    }

    /// The nontrivial generators, left to right.
    pub fn generators(&self) -> Vec<Tag> {
        match self {
            Witness::TBeta => vec![Tag::Beta],
            Witness::TEta => vec![Tag::Eta],
            Witness::ReflM | Witness::ReflN => vec![],
            Witness::Comp(u, v) => {
                let mut g = u.generators();
                g.extend(v.generators());
                g
            }
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::TBeta => f.write_str("beta"),
            Witness::TEta => f.write_str("eta"),
            Witness::ReflM => f.write_str("reflM"),
            Witness::ReflN => f.write_str("reflN"),
            Witness::Comp(u, v) => {
                match **u {
                    Witness::Comp(..) => write!(f, "({u})")?,
                    _ => write!(f, "{u}")?,
                }
                write!(f, " . {v}")
            }
        }
    }
}

/// Locates the generator of a `W(M, N)` witness.
pub fn tag_classify(w: &Witness) -> Result<Tag, WitnessError> {
    let (a, b) = w.endpoints()?;
    if (a, b) != (SpanEndpoint::M, SpanEndpoint::N) {
        return Err(WitnessError::NotSpan(a, b));
    }
    fn go(w: &Witness) -> Option<Tag> {
        match w {
            Witness::TBeta => Some(Tag::Beta),
            Witness::TEta => Some(Tag::Eta),
            Witness::ReflM | Witness::ReflN => None,
            Witness::Comp(u, v) => go(u).or_else(|| go(v)),
        }
    }
    Ok(go(w).expect("a W(M, N) witness moves from M to N exactly once"))
}

/// `left` copies of `reflM` before and `right` copies of `reflN` after.
pub fn pad(w: Witness, left: usize, right: usize) -> Witness {
    let mut out = w;
    for _ in 0..right {
        out = Witness::Comp(Box::new(out), Box::new(Witness::ReflN));
    }
    for _ in 0..left {
        out = Witness::Comp(Box::new(Witness::ReflM), Box::new(out));
    }
    out
}

/// Normal-form agreement of the span endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Epsilon {
    pub normal_form: Term,
    pub steps_from_m: usize,
    pub steps_from_n: usize,
}

#[derive(Clone, Debug)]
pub struct WitnessInterp {
    pub tag: Tag,
    pub epsilon: Epsilon,
    pub point: Thread,
}

pub fn epsilon() -> Epsilon {
    let (nm, sm) = normalize(&span_m(), EPSILON_FUEL).expect("span source normalizes");
    let (nn, sn) = normalize(&span_n(), EPSILON_FUEL).expect("span target is normal");
    assert_eq!(nm, nn, "span endpoints share a normal form");
    Epsilon { normal_form: nm, steps_from_m: sm.len(), steps_from_n: sn.len() }
}

pub fn interpret(k: &Kernel, w: &Witness, d: usize) -> Result<WitnessInterp, WitnessError> {
    if d < 1 {
        return Err(KinfError::DepthTooSmall { need: 1, got: d }.into());
    }
    let tag = tag_classify(w)?;
    let pole = match tag {
        Tag::Beta => RIGHT_POLE,
        Tag::Eta => LEFT_POLE,
    };
    let point = stage_embed(k, 0, &k.pole(pole).expect("base has both poles"), d)?;
    Ok(WitnessInterp { tag, epsilon: epsilon(), point })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub tags: (Tag, Tag),
    pub points: (Vec<String>, Vec<String>),
    pub distinct: bool,
    pub first_difference: Option<usize>,
    /// No 1-cell: the equality type of distinct threads is empty.
    pub no_one_cell: bool,
    /// No cell of any dimension ≥ 2, by induction on boundaries.
    pub no_higher_cells: bool,
    pub connected_by_refl: bool,
}

pub fn separation_report(k: &Kernel, w1: &Witness, w2: &Witness, d: usize) -> Result<SeparationReport, WitnessError> {
    let (i1, i2) = (interpret(k, w1, d)?, interpret(k, w2, d)?);
    let first_difference = (0..=d).find(|&n| !k.eq(i1.point.coord(n), i2.point.coord(n)));
    let distinct = first_difference.is_some();
    Ok(SeparationReport {
        tags: (i1.tag, i2.tag),
        points: (i1.point.show(k), i2.point.show(k)),
        distinct,
        first_difference,
        no_one_cell: distinct,
        // a (k+1)-cell needs a k-cell between the same points as boundary
        no_higher_cells: distinct,
        connected_by_refl: !distinct,
    })
}

/// Every witness tree with at most `max_size` nodes, typed or not.
pub fn all_trees(max_size: usize) -> Vec<Witness> {
    let mut by_size: Vec<Vec<Witness>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1] = vec![Witness::TBeta, Witness::TEta, Witness::ReflM, Witness::ReflN];
    }
    for s in 2..=max_size {
        let mut out = Vec::new();
        for ls in 1..s - 1 {
            let rs = s - 1 - ls;
            for l in &by_size[ls] {
                for r in &by_size[rs] {
                    out.push(Witness::Comp(Box::new(l.clone()), Box::new(r.clone())));
                }
            }
        }
        by_size[s] = out;
    }
    by_size.into_iter().flatten().collect()
}

/// The trees of [`all_trees`] typed `W(M, N)`.
pub fn span_witnesses(max_size: usize) -> Vec<Witness> {
    all_trees(max_size)
        .into_iter()
        .filter(|w| matches!(w.endpoints(), Ok((SpanEndpoint::M, SpanEndpoint::N))))
        .collect()
}
