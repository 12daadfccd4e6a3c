//! Compact text renderings used in report payloads.

use omegalam::front_seed::{Cell2Word, Gen, Letter};
use omegalam::RedSeq;

pub fn seq(p: &RedSeq) -> String {
    if p.is_empty() {
        return "id".into();
    }
    p.steps().iter().map(|s| s.to_string()).collect::<Vec<_>>().join("·")
}

fn letters(w: &[Letter]) -> String {
    if w.is_empty() {
        return "[]".into();
    }
    w.iter().map(letter).collect::<Vec<_>>().join(" ; ")
}

pub fn letter(l: &Letter) -> String {
    let body = match &l.gen {
        Gen::Ass(p, q, r) => format!("ass({}, {}, {})", seq(p), seq(q), seq(r)),
        Gen::EqG(p, q, r) => format!("eq({}, {}, {})", seq(p), seq(q), seq(r)),
        Gen::Cmp(p, q) => format!("cmp({}, {})", seq(p), seq(q)),
        Gen::Wl(a, w) => format!("{} ∗ [{}]", seq(a), letters(w)),
        Gen::Wr(w, d) => format!("[{}] ∗ {}", letters(w), seq(d)),
        Gen::Refl(e) => format!("refl({})", seq(e)),
        Gen::Syn(_) => "syn".into(),
        Gen::Named(n, _, _) => n.clone(),
    };
    if l.inv {
        format!("({body})⁻¹")
    } else {
        body
    }
}

pub fn word(w: &Cell2Word) -> String {
    letters(&w.0)
}
