//! Proof-relevant conversion for the untyped λ-calculus: reduction traces,
//! the globular tower of homotopies over them, its recursive completion, the
//! front-seed coherence calculus, and a finite inverse-limit model.

#![allow(clippy::large_enum_variant)]

pub mod completion;
pub mod domain;
pub mod front_seed;
pub mod gen;
pub mod kinf;
pub mod lambda;
pub mod tower;
pub mod witness;

pub use completion::{pack, pi0_equiv, realize, HigherDeriv, Pi0Result, RTowerCell, SigmaCell};
pub use domain::{Elem, FinPoset, FlatBase, Kernel};
pub use front_seed::{word_reduce, Cell2Word, Cell3Expr, Letter};
pub use kinf::{app, reify, stage_embed, EndoMap, Thread};
pub use lambda::{normalize, RedStep, StepKind, Term};
pub use tower::{Context, Homotopy2, Homotopy3, RedSeq};
pub use witness::{pad, separation_report, tag_classify, Tag, Witness};
