use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use omegalam::completion::{hd_map, pack, random_cell, random_deriv, realize, realize_boundary_check, reflexive_tower, DEFAULT_MAX_DIM};
use omegalam::domain::{check_projection_pair, FlatBase, Kernel, LEFT_POLE, RIGHT_POLE};
use omegalam::front_seed::{
    boundary3_words, fs_assoc_compare, fs_bridges, fs_pentagon, mixed_target_shell, pentagon_l, pentagon_r, word_reduce,
    Cell2Word, Cell3Expr, FsError, Gen,
};
use omegalam::kinf::{verify_laws, LawSamples, MAX_DEPTH};
use omegalam::lambda::{find_redexes, normalize};
use omegalam::tower::globular_check;
use omegalam::witness::{epsilon, interpret, separation_report, span_m, span_n, tag_classify, Tag, Witness};
use omegalam::{gen, pi0_equiv, Homotopy3, Pi0Result, RTowerCell, RedSeq, Term};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::parse::{parse_term, parse_terms, parse_witness, ParseError};
use crate::render;
use crate::report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Parser, Debug)]
#[command(name = "omegalam", version, about = "Proof-relevant βη-conversion checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Normalize a term leftmost-outermost and print the trace.
    Reduce {
        term: String,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
    /// Interpret a span witness and separate it from another.
    Witness {
        expr: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Witness to separate against (defaults to the other generator).
        #[arg(long)]
        against: Option<String>,
        #[command(flatten)]
        base: BaseOpts,
    },
    /// Print the tag of a span witness.
    Classify { expr: String },
    /// Tower checks.
    Tower {
        #[command(subcommand)]
        action: TowerAction,
    },
    /// Inverse-limit checks.
    Kinfty {
        #[command(subcommand)]
        action: KinftyAction,
    },
    /// Front-seed coherence boundary checks.
    Coherence {
        which: Which,
        /// Number of generated sequences beyond the built-in example.
        #[arg(long, default_value_t = 20)]
        sequences: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide convertibility and print a zigzag.
    Pi0 {
        term1: String,
        term2: String,
        #[arg(long, default_value_t = 100)]
        fuel: usize,
    },
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TowerAction {
    Check {
        #[arg(long, default_value_t = 9)]
        maxdim: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KinftyAction {
    Check {
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        basesize: usize,
        #[arg(long, default_value_t = 12)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        base: BaseOpts,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    Assoc,
    Pentagon,
    Bridges,
}

#[derive(Args, Debug, Clone, Default, Serialize)]
pub struct BaseOpts {
    /// Pole labels, comma separated; must include sR1 and sL1.
    #[arg(long, value_delimiter = ',')]
    pub poles: Option<Vec<String>>,
    /// TOML file with a `poles` list.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Deserialize)]
struct ConfigFile {
    poles: Vec<String>,
}

impl BaseOpts {
    /// Flag, then config file, then `basesize` generated labels.
    pub fn base(&self, basesize: usize) -> Result<FlatBase, CliError> {
        let poles = if let Some(p) = &self.poles {
            p.clone()
        } else if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            toml::from_str::<ConfigFile>(&text).map_err(|e| CliError::Config(e.to_string()))?.poles
        } else {
            if basesize < 3 {
                return Err(CliError::Config("base size must be at least 3".into()));
            }
            let mut p = vec![RIGHT_POLE.to_string(), LEFT_POLE.to_string()];
            p.extend((3..basesize).map(|i| format!("s{i}")));
            p
        };
        FlatBase::new(poles).map_err(|e| CliError::Config(e.to_string()))
    }
}

pub fn execute(cmd: &Command) -> Result<Report, CliError> {
    let mut r = Report::new(serde_json::to_value(cmd).expect("commands serialize"));
    match cmd {
        Command::Reduce { term, fuel } => reduce(&mut r, term, *fuel)?,
        Command::Witness { expr, depth, against, base } => witness(&mut r, expr, *depth, against.as_deref(), base)?,
        Command::Classify { expr } => {
            let w = parse_witness(expr)?;
            match tag_classify(&w) {
                Ok(tag) => {
                    r.result = json!({ "witness": w.to_string(), "tag": tag });
                    r.check("typed W(M, N)", true, "");
                }
                Err(e) => r.check("typed W(M, N)", false, e.to_string()),
            }
        }
        Command::Tower { action: TowerAction::Check { maxdim, samples, seed } } => tower_check(&mut r, *maxdim, *samples, *seed)?,
        Command::Kinfty { action: KinftyAction::Check { depth, basesize, samples, seed, base } } => {
            kinfty_check(&mut r, *depth, &base.base(*basesize)?, *samples, *seed)?
        }
        Command::Coherence { which, sequences, seed } => coherence(&mut r, *which, *sequences, *seed),
        Command::Pi0 { term1, term2, fuel } => pi0(&mut r, term1, term2, *fuel)?,
    }
    Ok(r)
}

fn reduce(r: &mut Report, term: &str, fuel: usize) -> Result<(), CliError> {
    let t = parse_term(term)?;
    match normalize(&t, fuel) {
        Ok((nf, trace)) => {
            let replay = RedSeq::from_steps(t.clone(), trace.clone());
            r.result = json!({
                "term": t.to_string(),
                "normal_form": nf.to_string(),
                "steps": trace.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            });
            r.check("normal form reached", true, format!("{} steps", trace.len()));
            r.check("trace replays", replay.as_ref().is_ok_and(|p| p.target() == &nf), "");
            r.check("no redex remains", find_redexes(&nf).is_empty(), "");
        }
        Err(e) => {
            r.result = json!({ "term": t.to_string(), "last": e.term.to_string(), "steps": e.trace.len() });
            r.check("normal form reached", false, format!("fuel {fuel} exhausted"));
        }
    }
    Ok(())
}

fn opposite(tag: Tag) -> Witness {
    match tag {
        Tag::Beta => Witness::TEta,
        Tag::Eta => Witness::TBeta,
    }
}

fn witness(r: &mut Report, expr: &str, depth: usize, against: Option<&str>, base: &BaseOpts) -> Result<(), CliError> {
    if depth > MAX_DEPTH {
        return Err(CliError::Invalid(format!("depth {depth} exceeds {MAX_DEPTH}")));
    }
    let k = Kernel::new(base.base(3)?);
    let w = parse_witness(expr)?;
    let tag = match tag_classify(&w) {
        Ok(t) => t,
        Err(e) => {
            r.check("typed W(M, N)", false, e.to_string());
            return Ok(());
        }
    };
    let other = match against {
        Some(a) => parse_witness(a)?,
        None => opposite(tag),
    };
    let i = interpret(&k, &w, depth).map_err(|e| CliError::Invalid(e.to_string()))?;
    let sep = separation_report(&k, &w, &other, depth).map_err(|e| CliError::Invalid(e.to_string()))?;
    let eps = epsilon();
    r.result = json!({
        "witness": w.to_string(),
        "tag": tag,
        "point": i.point.show(&k),
        "epsilon": { "normal_form": eps.normal_form.to_string(), "steps_from_m": eps.steps_from_m, "steps_from_n": eps.steps_from_n },
        "against": other.to_string(),
        "separation": sep,
    });
    r.check("typed W(M, N)", true, "");
    r.check("epsilon", eps.normal_form == span_n() && normalize(&span_m(), 100).is_ok(), "both endpoints normalize to #0 #1");
    r.check("point is coherent", i.point.validate(&k).is_ok(), "");
    let pole = if tag == Tag::Beta { RIGHT_POLE } else { LEFT_POLE };
    r.check("coordinate 0 is the tag pole", k.show(i.point.coord(0)) == pole, pole);
    let tags_differ = sep.tags.0 != sep.tags.1;
    r.check(
        "separation matches tags",
        sep.distinct == tags_differ && sep.no_one_cell == tags_differ && sep.no_higher_cells == tags_differ && sep.connected_by_refl != tags_differ,
        if tags_differ { "distinct points, no 1-cell, no higher cell" } else { "equal points, connected by refl" },
    );
    Ok(())
}

fn tower_base(rng: &mut gen::Rng8) -> Homotopy3 {
    let t = gen::term(rng, 6, 2);
    gen::cell3_at(rng, &t, 3)
}

fn tower_check(r: &mut Report, maxdim: usize, samples: usize, seed: u64) -> Result<(), CliError> {
    if !(4..=DEFAULT_MAX_DIM).contains(&maxdim) {
        return Err(CliError::Invalid(format!("maxdim must be between 4 and {DEFAULT_MAX_DIM}")));
    }
    let mut rng = gen::rng(seed);
    let bases: Vec<Homotopy3> = (0..samples).map(|_| tower_base(&mut rng)).collect();

    let glob = bases.iter().filter(|c| !globular_check(c)).count();
    r.check("globularity", glob == 0, format!("{} 3-cells, {glob} failures", bases.len()));

    let mut hd_fail = 0;
    for i in 0..samples {
        let depth = rng.gen_range(1..=8);
        let h = random_deriv(&mut rng, &(i as u64), depth);
        let f = |x: &u64| x * 7 + 1;
        let g = |x: &u64| x ^ 3;
        if hd_map(&|x: &u64| *x, &h) != h || hd_map(&g, &hd_map(&f, &h)) != hd_map(&|x: &u64| g(&f(x)), &h) {
            hd_fail += 1;
        }
    }
    r.check("higher-derivation functor laws", hd_fail == 0, format!("{samples} trees, {hd_fail} failures"));

    let mut per_dim = Vec::new();
    for n in 4..=maxdim {
        let fails = bases
            .iter()
            .filter(|b| {
                let c = random_cell(&mut rng, b, n, 3);
                !realize_boundary_check(n, &c)
            })
            .count();
        per_dim.push(json!({ "dim": n, "cells": bases.len(), "failures": fails }));
        r.check(format!("realize boundaries dim {n}"), fails == 0, format!("{} cells, {fails} failures", bases.len()));
    }

    let mut pack_fail = 0;
    for b in &bases {
        for d in 4..=6 {
            let c = reflexive_tower(RTowerCell::h3(b.clone()), d);
            let ok = match (pack(d, &c), c.source()) {
                (Ok(p), Some(s)) => {
                    let below = if d == 4 { realize(3, &s) } else { pack(d - 1, &s) };
                    below.is_ok_and(|below| p.source() == Some(below.clone()) && p.target() == Some(below))
                }
                _ => false,
            };
            pack_fail += usize::from(!ok);
        }
    }
    r.check("pack boundary commutation", pack_fail == 0, format!("{} reflexive triples, {pack_fail} failures", bases.len() * 3));
    r.result = json!({ "samples": samples, "maxdim": maxdim, "realize": per_dim });
    Ok(())
}

fn kinfty_check(r: &mut Report, depth: usize, base: &FlatBase, samples: usize, seed: u64) -> Result<(), CliError> {
    let k = Kernel::new(base.clone());
    if depth > MAX_DEPTH {
        return Err(CliError::Invalid(format!("depth {depth} exceeds {MAX_DEPTH}")));
    }
    if depth == 3 && !k.k2_enumerable() {
        return Err(CliError::Invalid("depth 3 needs an enumerable stage 2 (base size 3)".into()));
    }
    let (k0, k1) = (k.elements(0).expect("stage 0"), k.elements(1).expect("stage 1"));
    let p0 = check_projection_pair(&k, 0, &k0, &k1);
    r.check("projection pair n=0", p0.ok(), format!("retract {} / section {}", p0.retract_checked, p0.section_checked));
    let upper = k.elements(2).unwrap_or_default();
    let p1 = check_projection_pair(&k, 1, &k1, &upper);
    r.check("projection pair n=1", p1.ok(), format!("retract {} / section {}", p1.retract_checked, p1.section_checked));
    let mut rng = gen::rng(seed);
    let s = LawSamples { stage2_threads: samples / 3, endomaps: samples, density: samples };
    let laws = verify_laws(&k, depth, s, &mut rng).map_err(|e| CliError::Invalid(e.to_string()))?;
    for c in &laws.checks {
        let detail = match &c.counterexample {
            Some(x) => format!("{} checked, counterexample {x}", c.checked),
            None => format!("{} checked", c.checked),
        };
        r.check(c.name.clone(), c.pass, detail);
    }
    r.result = json!({
        "depth": depth,
        "base": (0..k.base().size()).map(|i| k.base().label(i).to_string()).collect::<Vec<_>>(),
        "stage_sizes": [k0.len(), k1.len(), upper.len()],
        "laws": laws,
    });
    Ok(())
}

/// `b, b⁻¹·b·b⁻¹, b, b⁻¹` on the span source, with `b` the β-step.
pub fn span_quadruple() -> [RedSeq; 4] {
    let b = RedSeq::single(span_m(), omegalam::RedStep::forward(omegalam::StepKind::Beta, vec![])).expect("span β-step");
    let back = b.invert();
    let q = back.compose(&b).and_then(|x| x.compose(&back)).expect("zigzag composes");
    [b.clone(), q, b, back]
}

/// Four composable walks of length 1 to 3 from a random term.
pub fn random_quadruple(rng: &mut gen::Rng8) -> [RedSeq; 4] {
    let t: Term = gen::term(rng, 5, 2);
    let mut out: Vec<RedSeq> = Vec::with_capacity(4);
    for _ in 0..4 {
        let src = out.last().map_or_else(|| t.clone(), |p| p.target().clone());
        let len = rng.gen_range(1..4);
        out.push(gen::walk(rng, &src, len));
    }
    out.try_into().expect("four walks")
}

#[derive(Serialize)]
struct WordPair {
    source: String,
    target: String,
}

fn words(e: &Cell3Expr) -> Result<(Cell2Word, Cell2Word), FsError> {
    boundary3_words(e)
}

fn pair(s: &Cell2Word, t: &Cell2Word) -> WordPair {
    WordPair { source: render::word(s), target: render::word(t) }
}

/// Boundary equations for one quadruple; returns rendered words and failures.
pub fn coherence_case(which: Which, q: &[RedSeq; 4]) -> Result<serde_json::Value, String> {
    let [p, q1, r, s] = q;
    let red = |w: Cell2Word| word_reduce(&w).map_err(|e| e.to_string());
    match which {
        Which::Assoc => {
            let c = fs_assoc_compare(p, q1, r).map_err(|e| e.to_string())?;
            let (bs, bt) = words(&c).map_err(|e| e.to_string())?;
            let want = red(Cell2Word::single(Gen::Ass(p.clone(), q1.clone(), r.clone())))?;
            if bs != want || !bt.is_empty() {
                return Err("assoc comparison boundary mismatch".into());
            }
            Ok(json!({ "comparison": pair(&bs, &bt) }))
        }
        Which::Pentagon => {
            let f = fs_pentagon(p, q1, r, s).map_err(|e| e.to_string())?;
            let (bs, bt) = words(&f).map_err(|e| e.to_string())?;
            let (l, rr) = (red(pentagon_l(p, q1, r, s).map_err(|e| e.to_string())?)?, red(pentagon_r(p, q1, r, s).map_err(|e| e.to_string())?)?);
            if bs != l || bt != rr {
                return Err("missing face boundary differs from the structural pentagon".into());
            }
            Ok(json!({ "missing_face": pair(&bs, &bt) }))
        }
        Which::Bridges => {
            let pent = Homotopy3::Pentagon(p.clone(), q1.clone(), r.clone(), s.clone());
            let b = fs_bridges(p, q1, r, s, &pent).map_err(|e| e.to_string())?;
            let l = red(pentagon_l(p, q1, r, s).map_err(|e| e.to_string())?)?;
            let mixed = red(mixed_target_shell(p, q1, r, s).map_err(|e| e.to_string())?)?;
            let (ss, st) = words(&b.source_bridge).map_err(|e| e.to_string())?;
            let (ts, tt) = words(&b.target_bridge).map_err(|e| e.to_string())?;
            let (hs, ht) = words(&b.shell_bridge).map_err(|e| e.to_string())?;
            if ss != l || ts != mixed || hs != ss || ht != ts || st != tt {
                return Err("bridge boundary equations fail".into());
            }
            Ok(json!({ "source_bridge": pair(&ss, &st), "target_bridge": pair(&ts, &tt), "shell_bridge": pair(&hs, &ht) }))
        }
    }
}

fn coherence(r: &mut Report, which: Which, sequences: usize, seed: u64) {
    let example = coherence_case(which, &span_quadruple());
    match &example {
        Ok(v) => r.result = json!({ "example": v, "generated": sequences }),
        Err(e) => r.result = json!({ "example_error": e }),
    }
    r.check("span example", example.is_ok(), example.as_ref().err().cloned().unwrap_or_default());
    let mut rng = gen::rng(seed);
    let mut fails = Vec::new();
    for i in 0..sequences {
        if let Err(e) = coherence_case(which, &random_quadruple(&mut rng)) {
            fails.push(format!("#{i}: {e}"));
        }
    }
    r.check("generated sequences", fails.is_empty(), format!("{sequences} cases, {} failures {}", fails.len(), fails.join("; ")).trim().to_string());
}

fn pi0(r: &mut Report, t1: &str, t2: &str, fuel: usize) -> Result<(), CliError> {
    let [m, n]: [Term; 2] = parse_terms(&[t1, t2])?.try_into().expect("two terms");
    match pi0_equiv(&m, &n, fuel) {
        Pi0Result::Zigzag(z) => {
            let down = z.steps().iter().take_while(|s| s.is_forward()).count();
            let up = z.len() - down;
            r.result = json!({
                "verdict": "convertible",
                "zigzag": z.steps().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "segments": [down, up],
            });
            r.check("zigzag replays", z.is_valid() && z.source() == &m && z.target() == &n, format!("{} steps", z.len()));
        }
        Pi0Result::NotFound { nf_left, nf_right } => {
            r.result = json!({ "verdict": "distinct normal forms", "nf_left": nf_left.to_string(), "nf_right": nf_right.to_string() });
            r.check("decided", nf_left != nf_right, "");
        }
        Pi0Result::FuelExhausted => {
            r.result = json!({ "verdict": "fuel exhausted" });
            r.check("decided", false, format!("fuel {fuel} exhausted"));
        }
    }
    Ok(())
}
