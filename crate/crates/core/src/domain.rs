//! Finite-stage substrate for the inverse-limit model: the flat base `K₀`,
//! monotone function-space stages, projection pairs, joins and step maps.
//!
//! Stages 0 and 1 are enumerated eagerly. Stage 2 is enumerated lazily (and
//! only for small bases) as a flat table store. Stage 3 elements are symbolic
//! maps over stage 2.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_ENUM_CAP: usize = 1;
pub const MAX_BASE: usize = 6;
/// Largest stage 1 for which stage 2 is enumerated.
pub const MAX_K1_FOR_K2: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("stage {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("table is not monotone")]
    NotMonotone,
    #[error("not a poset: {0}")]
    NotAPoset(String),
    #[error("invalid base: {0}")]
    BaseInvalid(String),
    #[error("stage {n} is too large to enumerate for this base")]
    Unenumerable { n: usize },
    #[error("stage {n} is not supported")]
    StageUnsupported { n: usize },
}

/// A finite poset given by its order matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinPoset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    bottom: usize,
}

impl FinPoset {
    pub fn new(labels: Vec<String>, leq: Vec<Vec<bool>>, bottom: usize) -> Result<FinPoset, DomainError> {
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(DomainError::NotAPoset("matrix shape".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(DomainError::NotAPoset(format!("{} is not reflexive", labels[i])));
            }
            if !leq[bottom][i] {
                return Err(DomainError::NotAPoset(format!("bottom is not below {}", labels[i])));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(DomainError::NotAPoset("antisymmetry fails".into()));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(DomainError::NotAPoset("transitivity fails".into()));
                    }
                }
            }
        }
        Ok(FinPoset { labels, leq, bottom })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Flat base poset: `⊥` at index 0 below pairwise incomparable poles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatBase {
    poles: Vec<String>,
}

pub const BOTTOM_LABEL: &str = "⊥";
pub const RIGHT_POLE: &str = "sR1";
pub const LEFT_POLE: &str = "sL1";

impl FlatBase {
    pub fn new(poles: Vec<String>) -> Result<FlatBase, DomainError> {
        for req in [RIGHT_POLE, LEFT_POLE] {
            if !poles.iter().any(|p| p == req) {
                return Err(DomainError::BaseInvalid(format!("missing pole {req}")));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for p in &poles {
            if p == BOTTOM_LABEL || !seen.insert(p) {
                return Err(DomainError::BaseInvalid(format!("duplicate or reserved label {p}")));
            }
        }
        if poles.len() + 1 > MAX_BASE {
            return Err(DomainError::BaseInvalid(format!("at most {} poles", MAX_BASE - 1)));
        }
        Ok(FlatBase { poles })
    }

    /// `{⊥, sR1, sL1}`.
    pub fn standard() -> FlatBase {
        FlatBase { poles: vec![RIGHT_POLE.into(), LEFT_POLE.into()] }
    }

    /// Number of elements including `⊥`.
    pub fn size(&self) -> usize {
        self.poles.len() + 1
    }

    pub fn label(&self, i: usize) -> &str {
        if i == 0 {
            BOTTOM_LABEL
        } else {
            &self.poles[i - 1]
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        if label == BOTTOM_LABEL {
            return Some(0);
        }
        self.poles.iter().position(|p| p == label).map(|i| i + 1)
    }

    pub fn poset(&self) -> FinPoset {
        let n = self.size();
        let leq = (0..n).map(|i| (0..n).map(|j| i == 0 || i == j).collect()).collect();
        FinPoset::new((0..n).map(|i| self.label(i).to_string()).collect(), leq, 0).expect("flat order is a poset")
    }
}

pub type StepPair = (Arc<[u16]>, Arc<[u16]>);
pub type EvalFn = Arc<dyn Fn(&Kernel, &[u16]) -> Arc<[u16]> + Send + Sync>;

/// A monotone map `K₂ → K₂`, kept symbolic.
#[derive(Clone)]
pub enum SymFn {
    /// `f₂⁺(g) = f₁⁺ ∘ g ∘ f₁⁻`
    Lift(Arc<[u16]>),
    Const(Arc<[u16]>),
    /// Join of step maps `[a ⇒ b]`.
    StepJoin(Vec<StepPair>),
    /// A named map given by evaluation.
    Eval { name: String, f: EvalFn },
}

impl fmt::Debug for SymFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymFn::Lift(g) => write!(f, "Lift({g:?})"),
            SymFn::Const(c) => write!(f, "Const({c:?})"),
            SymFn::StepJoin(s) => write!(f, "StepJoin({s:?})"),
            SymFn::Eval { name, .. } => write!(f, "Eval({name})"),
        }
    }
}

/// An element of stage `n`, tagged by its stage.
#[derive(Clone, Debug)]
pub enum Elem {
    E0(u16),
    /// Index into the enumerated stage 1.
    E1(u16),
    /// Table over stage-1 indices.
    E2(Arc<[u16]>),
    E3(Arc<SymFn>),
}

impl Elem {
    pub fn stage(&self) -> usize {
        match self {
            Elem::E0(_) => 0,
            Elem::E1(_) => 1,
            Elem::E2(_) => 2,
            Elem::E3(_) => 3,
        }
    }

    fn e0(&self) -> u16 {
        match self {
            Elem::E0(x) => *x,
            _ => panic!("expected a stage-0 element, got stage {}", self.stage()),
        }
    }

    fn e1(&self) -> u16 {
        match self {
            Elem::E1(x) => *x,
            _ => panic!("expected a stage-1 element, got stage {}", self.stage()),
        }
    }

    fn e2(&self) -> &Arc<[u16]> {
        match self {
            Elem::E2(x) => x,
            _ => panic!("expected a stage-2 element, got stage {}", self.stage()),
        }
    }

    fn e3(&self) -> &Arc<SymFn> {
        match self {
            Elem::E3(x) => x,
            _ => panic!("expected a stage-3 element, got stage {}", self.stage()),
        }
    }
}

/// Flat store of all stage-2 tables.
pub struct K2Store {
    width: usize,
    data: Vec<u16>,
}

impl K2Store {
    pub fn len(&self) -> usize {
        self.data.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u16] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u16]> {
        self.data.chunks_exact(self.width)
    }
}

/// Precomputed stages 0 and 1 over a flat base, with lazy stage 2.
pub struct Kernel {
    base: FlatBase,
    k1: Vec<Vec<u16>>,
    k1_index: HashMap<Vec<u16>, u16>,
    /// Base-`b` code of a table to its stage-1 index (`u16::MAX` if absent).
    k1_code: Vec<u16>,
    k1_leq: Vec<Vec<bool>>,
    /// `f₀⁺(x)` as a stage-1 index.
    f0plus: Vec<u16>,
    /// `f₀⁻(g)` per stage-1 index.
    f0minus: Vec<u16>,
    /// `f₁⁺(g)` per stage-1 index, as a stage-2 table.
    f1plus: Vec<Arc<[u16]>>,
    k2: OnceLock<Option<K2Store>>,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Kernel(base = {}, |K1| = {})", self.base.size(), self.k1.len())
    }
}

fn k1_tables(b: usize) -> Vec<Vec<u16>> {
    // monotone self-maps of a flat poset: either g(⊥) = ⊥ with free values
    // elsewhere, or g is constant at a pole
    let mut out = Vec::new();
    let poles = b - 1;
    let total = b.pow(poles as u32);
    for code in 0..total {
        let mut t = vec![0u16; b];
        let mut c = code;
        for slot in t.iter_mut().skip(1) {
            *slot = (c % b) as u16;
            c /= b;
        }
        out.push(t);
    }
    for p in 1..b {
        out.push(vec![p as u16; b]);
    }
    out
}

impl Kernel {
    pub fn new(base: FlatBase) -> Kernel {
        let b = base.size();
        let k1 = k1_tables(b);
        let k1_index: HashMap<Vec<u16>, u16> = k1.iter().enumerate().map(|(i, t)| (t.clone(), i as u16)).collect();
        let mut k1_code = vec![u16::MAX; b.pow(b as u32)];
        for (i, t) in k1.iter().enumerate() {
            k1_code[t.iter().rev().fold(0, |acc, &x| acc * b + x as usize)] = i as u16;
        }
        let leq0 = |x: u16, y: u16| x == 0 || x == y;
        let k1_leq: Vec<Vec<bool>> = k1
            .iter()
            .map(|f| k1.iter().map(|g| f.iter().zip(g).all(|(&x, &y)| leq0(x, y))).collect())
            .collect();
        let f0plus: Vec<u16> = (0..b).map(|x| k1_index[&vec![x as u16; b]]).collect();
        let f0minus: Vec<u16> = k1.iter().map(|t| t[0]).collect();
        // f₁⁺(g)(h) = f₀⁺(g(f₀⁻(h)))
        let f1plus: Vec<Arc<[u16]>> = k1
            .iter()
            .map(|g| (0..k1.len()).map(|h| f0plus[g[f0minus[h] as usize] as usize]).collect())
            .collect();
        Kernel { base, k1, k1_index, k1_code, k1_leq, f0plus, f0minus, f1plus, k2: OnceLock::new() }
    }

    pub fn standard() -> Kernel {
        Kernel::new(FlatBase::standard())
    }

    pub fn base(&self) -> &FlatBase {
        &self.base
    }

    pub fn k1_len(&self) -> usize {
        self.k1.len()
    }

    pub fn k1_table(&self, i: u16) -> &[u16] {
        &self.k1[i as usize]
    }

    pub fn k1_of_table(&self, t: &[u16]) -> Option<u16> {
        self.k1_index.get(t).copied()
    }

    pub fn pole(&self, label: &str) -> Option<Elem> {
        self.base.index_of(label).map(|i| Elem::E0(i as u16))
    }

    /// Whether stage 2 can be enumerated for this base.
    pub fn k2_enumerable(&self) -> bool {
        self.k1.len() <= MAX_K1_FOR_K2
    }

    /// All stage-2 tables, enumerated on first use.
    pub fn k2(&self) -> Option<&K2Store> {
        self.k2
            .get_or_init(|| if self.k2_enumerable() { Some(self.enumerate_k2()) } else { None })
            .as_ref()
    }

    fn enumerate_k2(&self) -> K2Store {
        let n = self.k1.len();
        // order positions so that every element comes after those below it
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (0..n).filter(|&j| self.k1_leq[j][i]).count());
        let mut data = Vec::new();
        let mut table = vec![0u16; n];
        self.k2_rec(&order, 0, &mut table, &mut data);
        K2Store { width: n, data }
    }

    fn k2_rec(&self, order: &[usize], pos: usize, table: &mut [u16], out: &mut Vec<u16>) {
        if pos == order.len() {
            out.extend_from_slice(table);
            return;
        }
        let x = order[pos];
        'v: for v in 0..self.k1.len() as u16 {
            for &y in &order[..pos] {
                if self.k1_leq[y][x] && !self.k1_leq[table[y] as usize][v as usize] {
                    continue 'v;
                }
                if self.k1_leq[x][y] && !self.k1_leq[v as usize][table[y] as usize] {
                    continue 'v;
                }
            }
            table[x] = v;
            self.k2_rec(order, pos + 1, table, out);
        }
    }

    pub fn bottom(&self, n: usize) -> Elem {
        match n {
            0 => Elem::E0(0),
            1 => Elem::E1(self.f0plus[0]),
            2 => Elem::E2(self.const2(self.f0plus[0])),
            _ => Elem::E3(Arc::new(SymFn::Const(self.const2(self.f0plus[0])))),
        }
    }

    fn const2(&self, v: u16) -> Arc<[u16]> {
        vec![v; self.k1.len()].into()
    }

    fn leq1(&self, a: u16, b: u16) -> bool {
        self.k1_leq[a as usize][b as usize]
    }

    fn leq2(&self, a: &[u16], b: &[u16]) -> bool {
        a.iter().zip(b).all(|(&x, &y)| self.leq1(x, y))
    }

    /// Order at stage `n`. Stage 3 sweeps all of stage 2.
    pub fn leq(&self, a: &Elem, b: &Elem) -> bool {
        match (a, b) {
            (Elem::E0(x), Elem::E0(y)) => *x == 0 || x == y,
            (Elem::E1(x), Elem::E1(y)) => self.leq1(*x, *y),
            (Elem::E2(x), Elem::E2(y)) => self.leq2(x, y),
            (Elem::E3(f), Elem::E3(g)) => {
                let k2 = self.k2().expect("stage-3 order needs an enumerable stage 2");
                k2.iter().all(|t| self.leq2(&self.eval3(f, t), &self.eval3(g, t)))
            }
            _ => panic!("comparing elements of stages {} and {}", a.stage(), b.stage()),
        }
    }

    /// Equality at stage `n`, extensional at stage 3.
    pub fn eq(&self, a: &Elem, b: &Elem) -> bool {
        match (a, b) {
            (Elem::E0(x), Elem::E0(y)) | (Elem::E1(x), Elem::E1(y)) => x == y,
            (Elem::E2(x), Elem::E2(y)) => x == y,
            (Elem::E3(f), Elem::E3(g)) => {
                if Arc::ptr_eq(f, g) {
                    return true;
                }
                let k2 = self.k2().expect("stage-3 equality needs an enumerable stage 2");
                k2.iter().all(|t| self.eval3(f, t) == self.eval3(g, t))
            }
            _ => false,
        }
    }

    /// First stage-2 argument where two stage-3 elements differ.
    pub fn diff3(&self, f: &Elem, g: &Elem) -> Option<Arc<[u16]>> {
        let k2 = self.k2()?;
        k2.iter().find(|t| self.eval3(f.e3(), t) != self.eval3(g.e3(), t)).map(Arc::from)
    }

    pub fn eval3(&self, f: &SymFn, t: &[u16]) -> Arc<[u16]> {
        match f {
            SymFn::Lift(g) => {
                let inner = self.fminus1(t);
                self.f1plus[g[inner as usize] as usize].clone()
            }
            SymFn::Const(c) => c.clone(),
            SymFn::StepJoin(steps) => {
                let mut acc: Vec<u16> = vec![self.f0plus[0]; self.k1.len()];
                for (a, b) in steps {
                    if self.leq2(a, t) {
                        for (x, &y) in acc.iter_mut().zip(b.iter()) {
                            *x = self.lub1(*x, y).expect("step joins are bounded");
                        }
                    }
                }
                acc.into()
            }
            SymFn::Eval { f, .. } => f(self, t),
        }
    }

    /// `f(x)` for `f` at stage `n+1` and `x` at stage `n`.
    pub fn apply(&self, f: &Elem, x: &Elem) -> Elem {
        match f {
            Elem::E1(i) => Elem::E0(self.k1[*i as usize][x.e0() as usize]),
            Elem::E2(t) => Elem::E1(t[x.e1() as usize]),
            Elem::E3(g) => Elem::E2(self.eval3(g, x.e2())),
            Elem::E0(_) => panic!("stage-0 elements are not maps"),
        }
    }

    fn fminus1(&self, t: &[u16]) -> u16 {
        // f₁⁻(t) = f₀⁻ ∘ t ∘ f₀⁺
        let b = self.base.size();
        let code = (0..b).rev().fold(0, |acc, x| acc * b + self.f0minus[t[self.f0plus[x] as usize] as usize] as usize);
        self.k1_code[code]
    }

    /// Embedding `f_n⁺ : K_n → K_{n+1}`.
    pub fn fplus(&self, n: usize, x: &Elem) -> Elem {
        match n {
            0 => Elem::E1(self.f0plus[x.e0() as usize]),
            1 => Elem::E2(self.f1plus[x.e1() as usize].clone()),
            2 => Elem::E3(Arc::new(SymFn::Lift(x.e2().clone()))),
            _ => panic!("stage {n} embedding is not supported"),
        }
    }

    /// Projection `f_n⁻ : K_{n+1} → K_n`.
    pub fn fminus(&self, n: usize, y: &Elem) -> Elem {
        match n {
            0 => Elem::E0(self.f0minus[y.e1() as usize]),
            1 => Elem::E1(self.fminus1(y.e2())),
            2 => {
                // f₂⁻(F) = f₁⁻ ∘ F ∘ f₁⁺
                let f = y.e3();
                let t: Vec<u16> = (0..self.k1.len()).map(|i| self.fminus1(&self.eval3(f, &self.f1plus[i]))).collect();
                Elem::E2(t.into())
            }
            _ => panic!("stage {n} projection is not supported"),
        }
    }

    fn lub1(&self, a: u16, b: u16) -> Option<u16> {
        let (ta, tb) = (&self.k1[a as usize], &self.k1[b as usize]);
        let b = self.base.size();
        let mut code = 0;
        for (&x, &y) in ta.iter().zip(tb).rev() {
            let v = if x == 0 {
                y
            } else if y == 0 || x == y {
                x
            } else {
                return None;
            };
            code = code * b + v as usize;
        }
        Some(self.k1_code[code])
    }

    /// Least upper bound, or `None` if `xs` has no upper bound. Stages 0 to 2.
    pub fn lub(&self, n: usize, xs: &[Elem]) -> Option<Elem> {
        let mut acc = self.bottom(n);
        for x in xs {
            acc = match (&acc, x) {
                (Elem::E0(a), Elem::E0(b)) => {
                    if *a == 0 || a == b {
                        Elem::E0(*b)
                    } else if *b == 0 {
                        Elem::E0(*a)
                    } else {
                        return None;
                    }
                }
                (Elem::E1(a), Elem::E1(b)) => Elem::E1(self.lub1(*a, *b)?),
                (Elem::E2(a), Elem::E2(b)) => {
                    let t: Option<Vec<u16>> = a.iter().zip(b.iter()).map(|(&x, &y)| self.lub1(x, y)).collect();
                    Elem::E2(t?.into())
                }
                _ => panic!("lub is supported at stages 0 to 2"),
            };
        }
        Some(acc)
    }

    /// `[a ⇒ b]`: `x ↦ b` if `a ≤ x`, else `⊥`. An element of stage `n+1`.
    pub fn step_map(&self, n: usize, a: &Elem, b: &Elem) -> Elem {
        match n {
            0 => {
                let t: Vec<u16> =
                    (0..self.base.size() as u16).map(|x| if self.leq(a, &Elem::E0(x)) { b.e0() } else { 0 }).collect();
                Elem::E1(self.k1_index[&t])
            }
            1 => {
                let bot = self.f0plus[0];
                let t: Vec<u16> = (0..self.k1.len() as u16).map(|x| if self.leq1(a.e1(), x) { b.e1() } else { bot }).collect();
                Elem::E2(t.into())
            }
            2 => Elem::E3(Arc::new(SymFn::StepJoin(vec![(a.e2().clone(), b.e2().clone())]))),
            _ => panic!("step maps are supported up to stage 3"),
        }
    }

    /// Join of step maps at stage 3 from `(a, b)` pairs over stage 2.
    pub fn step_join3(&self, pairs: Vec<(Elem, Elem)>) -> Elem {
        Elem::E3(Arc::new(SymFn::StepJoin(pairs.into_iter().map(|(a, b)| (a.e2().clone(), b.e2().clone())).collect())))
    }

    /// Builds a stage-`n+1` element from a table over stage `n`, checking
    /// monotonicity. Stages 0 and 1 only.
    pub fn from_table(&self, n: usize, table: &[Elem]) -> Result<Elem, DomainError> {
        let dom = self.elements(n)?;
        if table.len() != dom.len() {
            return Err(DomainError::NotMonotone);
        }
        for (i, x) in dom.iter().enumerate() {
            for (j, y) in dom.iter().enumerate() {
                if self.leq(x, y) && !self.leq(&table[i], &table[j]) {
                    return Err(DomainError::NotMonotone);
                }
            }
        }
        match n {
            0 => {
                let t: Vec<u16> = table.iter().map(Elem::e0).collect();
                Ok(Elem::E1(self.k1_index[&t]))
            }
            1 => Ok(Elem::E2(table.iter().map(Elem::e1).collect::<Vec<_>>().into())),
            _ => Err(DomainError::StageUnsupported { n }),
        }
    }

    /// All elements of stage `n` for `n ≤ 2`.
    pub fn elements(&self, n: usize) -> Result<Vec<Elem>, DomainError> {
        match n {
            0 => Ok((0..self.base.size() as u16).map(Elem::E0).collect()),
            1 => Ok((0..self.k1.len() as u16).map(Elem::E1).collect()),
            2 => {
                let k2 = self.k2().ok_or(DomainError::Unenumerable { n })?;
                Ok(k2.iter().map(|t| Elem::E2(t.into())).collect())
            }
            _ => Err(DomainError::Unenumerable { n }),
        }
    }

    /// Fully enumerated stage `n` with its order, up to `cap`.
    pub fn enumerate_stage(&self, n: usize, cap: usize) -> Result<Stage, DomainError> {
        if n > cap {
            return Err(DomainError::CapExceeded { n, cap });
        }
        let elements = self.elements(n)?;
        let poset = if elements.len() <= 4096 {
            let labels = elements.iter().map(|e| self.show(e)).collect();
            let leq = elements.iter().map(|a| elements.iter().map(|b| self.leq(a, b)).collect()).collect();
            Some(FinPoset::new(labels, leq, 0)?)
        } else {
            None
        };
        Ok(Stage { level: n, elements, poset })
    }

    pub fn show(&self, e: &Elem) -> String {
        match e {
            Elem::E0(x) => self.base.label(*x as usize).to_string(),
            Elem::E1(i) => {
                let parts: Vec<&str> = self.k1[*i as usize].iter().map(|&x| self.base.label(x as usize)).collect();
                format!("[{}]", parts.join(","))
            }
            Elem::E2(t) => {
                let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                format!("<{}>", parts.join(","))
            }
            Elem::E3(f) => {
                let tab = |t: &[u16]| t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                match &**f {
                    SymFn::Lift(g) => format!("lift<{}>", tab(g)),
                    SymFn::Const(c) => format!("const<{}>", tab(c)),
                    SymFn::StepJoin(s) => format!("steps({})", s.len()),
                    SymFn::Eval { name, .. } => name.clone(),
                }
            }
        }
    }
}

/// A fully enumerated stage. `poset` is present when the order matrix is
/// small enough to materialize.
#[derive(Clone, Debug)]
pub struct Stage {
    pub level: usize,
    pub elements: Vec<Elem>,
    pub poset: Option<FinPoset>,
}

impl Stage {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// A validated monotone map between enumerated stages.
#[derive(Clone, Debug)]
pub struct MonoMap {
    pub stage: usize,
    pub table: Vec<Elem>,
}

impl MonoMap {
    pub fn new(k: &Kernel, stage: usize, table: Vec<Elem>) -> Result<MonoMap, DomainError> {
        k.from_table(stage, &table)?;
        Ok(MonoMap { stage, table })
    }

    pub fn to_elem(&self, k: &Kernel) -> Elem {
        k.from_table(self.stage, &self.table).expect("validated on construction")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub n: usize,
    pub retract_checked: usize,
    pub retract_failures: Vec<String>,
    pub section_checked: usize,
    pub section_failures: Vec<String>,
}

impl ProjectionReport {
    pub fn ok(&self) -> bool {
        self.retract_failures.is_empty() && self.section_failures.is_empty()
    }
}

/// `f_n⁻(f_n⁺(x)) = x` on `lower` and `f_n⁺(f_n⁻(y)) ≤ y` on `upper`.
pub fn check_projection_pair(k: &Kernel, n: usize, lower: &[Elem], upper: &[Elem]) -> ProjectionReport {
    let mut r = ProjectionReport { n, ..Default::default() };
    for x in lower {
        r.retract_checked += 1;
        if !k.eq(&k.fminus(n, &k.fplus(n, x)), x) {
            r.retract_failures.push(k.show(x));
        }
    }
    for y in upper {
        r.section_checked += 1;
        if !k.leq(&k.fplus(n, &k.fminus(n, y)), y) {
            r.section_failures.push(k.show(y));
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force oracle: all maps base→base, filtered by monotonicity.
    fn brute_k1(b: usize) -> usize {
        let leq = |x: usize, y: usize| x == 0 || x == y;
        let mut count = 0;
        for code in 0..b.pow(b as u32) {
            let t: Vec<usize> = (0..b).map(|i| code / b.pow(i as u32) % b).collect();
            if (0..b).all(|x| (0..b).all(|y| !leq(x, y) || leq(t[x], t[y]))) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn stage_sizes() {
        let k = Kernel::standard();
        assert_eq!(k.enumerate_stage(0, 1).unwrap().len(), 3);
        assert_eq!(k.enumerate_stage(1, 1).unwrap().len(), 11);
        assert_eq!(brute_k1(3), 11);
        assert_eq!(brute_k1(4), k1_tables(4).len());
        assert!(matches!(k.enumerate_stage(2, 1), Err(DomainError::CapExceeded { .. })));
    }

    #[test]
    fn poset_axioms_checked() {
        let bad = FinPoset::new(vec!["a".into(), "b".into()], vec![vec![true, true], vec![true, true]], 0);
        assert!(bad.is_err());
        assert!(FlatBase::new(vec!["sR1".into()]).is_err());
        assert!(FlatBase::new(vec!["sR1".into(), "sL1".into(), "s2".into()]).is_ok());
    }

    #[test]
    fn projection_pairs_low() {
        let k = Kernel::standard();
        let sr = k.pole("sR1").unwrap();
        assert!(k.eq(&k.fminus(0, &k.fplus(0, &sr)), &sr));
        let k0 = k.elements(0).unwrap();
        let k1 = k.elements(1).unwrap();
        assert!(check_projection_pair(&k, 0, &k0, &k1).ok());
        // f₁⁻ ∘ f₁⁺ = id on all of stage 1
        let r = check_projection_pair(&k, 1, &k1, &[]);
        assert!(r.ok());
        assert_eq!(r.retract_checked, 11);
    }

    #[test]
    fn step_maps() {
        let k = Kernel::standard();
        let (bot, sr, sl) = (Elem::E0(0), k.pole("sR1").unwrap(), k.pole("sL1").unwrap());
        let c = k.step_map(0, &bot, &sl);
        for x in k.elements(0).unwrap() {
            assert!(k.eq(&k.apply(&c, &x), &sl));
        }
        let s = k.step_map(0, &sr, &sl);
        assert!(k.eq(&k.apply(&s, &sr), &sl));
        assert!(k.eq(&k.apply(&s, &sl), &bot));
        assert!(k.eq(&k.step_map(0, &sr, &bot), &k.bottom(1)));
    }

    #[test]
    fn lub_matches_brute_force() {
        let k = Kernel::standard();
        assert!(k.lub(0, &[k.pole("sR1").unwrap(), k.pole("sL1").unwrap()]).is_none());
        assert!(k.eq(&k.lub(0, &[Elem::E0(0)]).unwrap(), &Elem::E0(0)));
        let all = k.elements(1).unwrap();
        for a in &all {
            for b in &all {
                let ubs: Vec<&Elem> = all.iter().filter(|u| k.leq(a, u) && k.leq(b, u)).collect();
                let least = ubs.iter().find(|u| ubs.iter().all(|v| k.leq(u, v)));
                match (k.lub(1, &[a.clone(), b.clone()]), least) {
                    (Some(l), Some(m)) => assert!(k.eq(&l, m)),
                    (None, None) => {}
                    (got, want) => panic!("lub mismatch: {got:?} vs {want:?}"),
                }
            }
        }
    }

    #[test]
    fn stage_one_is_algebraic() {
        // every element is the join of the step maps below it
        let k = Kernel::standard();
        let k0 = k.elements(0).unwrap();
        for f in k.elements(1).unwrap() {
            let mut below = Vec::new();
            for a in &k0 {
                for b in &k0 {
                    let s = k.step_map(0, a, b);
                    if k.leq(&s, &f) {
                        below.push(s);
                    }
                }
            }
            assert!(k.eq(&k.lub(1, &below).unwrap(), &f));
        }
    }

    #[test]
    fn non_monotone_table_rejected() {
        let k = Kernel::standard();
        let (bot, sr, sl) = (Elem::E0(0), k.pole("sR1").unwrap(), k.pole("sL1").unwrap());
        assert!(matches!(MonoMap::new(&k, 0, vec![sr.clone(), sl, bot.clone()]), Err(DomainError::NotMonotone)));
        assert!(MonoMap::new(&k, 0, vec![bot, sr.clone(), sr]).is_ok());
    }
}
