//! Text syntax for terms and span witnesses.
//!
//! Terms accept the named form `\x y. e` (also `λ`) and the de Bruijn form
//! `#n`, `\ . e`. Free names get indices in order of first occurrence.

use omegalam::witness::Witness;
use omegalam::Term;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lam,
    Dot,
    Open,
    Close,
    Ident(String),
    Index(usize),
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '\\' | 'λ' => {
                it.next();
                out.push((i, Tok::Lam));
            }
            '.' => {
                it.next();
                out.push((i, Tok::Dot));
            }
            '(' => {
                it.next();
                out.push((i, Tok::Open));
            }
            ')' => {
                it.next();
                out.push((i, Tok::Close));
            }
            '#' => {
                it.next();
                let mut digits = String::new();
                while let Some(&(_, d)) = it.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    digits.push(d);
                    it.next();
                }
                match digits.parse() {
                    Ok(n) => out.push((i, Tok::Index(n))),
                    Err(_) => return err(i, "expected digits after '#'"),
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&(_, d)) = it.peek() {
                    if !(d.is_alphanumeric() || d == '_' || d == '\'') || d == 'λ' {
                        break;
                    }
                    name.push(d);
                    it.next();
                }
                out.push((i, Tok::Ident(name)));
            }
            _ => return err(i, format!("unexpected character {c:?}")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    /// Binder names, innermost last; `None` for anonymous binders.
    scope: Vec<Option<String>>,
    free: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.peek() == Some(&Tok::Lam) {
            return self.lambda();
        }
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Lam) => return Ok(Term::app(acc, self.lambda()?)),
                Some(Tok::Ident(_) | Tok::Index(_) | Tok::Open) => acc = Term::app(acc, self.atom()?),
                _ => return Ok(acc),
            }
        }
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.at += 1;
        let mut names = Vec::new();
        while let Some(Tok::Ident(n)) = self.peek() {
            names.push(Some(n.clone()));
            self.at += 1;
        }
        if names.is_empty() {
            names.push(None);
        }
        if self.peek() != Some(&Tok::Dot) {
            return err(self.pos(), "expected '.' after binder");
        }
        self.at += 1;
        let n = names.len();
        self.scope.extend(names);
        let mut body = self.term()?;
        self.scope.truncate(self.scope.len() - n);
        for _ in 0..n {
            body = Term::lam(body);
        }
        Ok(body)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Index(n)) => {
                self.at += 1;
                Ok(Term::var(n))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                let depth = self.scope.len();
                if let Some(k) = self.scope.iter().rev().position(|b| b.as_deref() == Some(name.as_str())) {
                    return Ok(Term::var(k));
                }
                let i = match self.free.iter().position(|f| f == &name) {
                    Some(i) => i,
                    None => {
                        self.free.push(name);
                        self.free.len() - 1
                    }
                };
                Ok(Term::var(depth + i))
            }
            Some(Tok::Open) => {
                self.at += 1;
                let t = self.term()?;
                if self.peek() != Some(&Tok::Close) {
                    return err(self.pos(), "expected ')'");
                }
                self.at += 1;
                Ok(t)
            }
            Some(t) => err(pos, format!("unexpected token {t:?}")),
            None => err(pos, "unexpected end of input"),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_with(text, &mut Vec::new())
}

/// Parses several terms over one free-name environment, so `x` means the
/// same variable in each.
pub fn parse_terms(texts: &[&str]) -> Result<Vec<Term>, ParseError> {
    let mut free = Vec::new();
    texts.iter().map(|t| parse_with(t, &mut free)).collect()
}

fn parse_with(text: &str, free: &mut Vec<String>) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return err(0, "empty term");
    }
    let mut p = Parser { toks, at: 0, end: text.len(), scope: Vec::new(), free: std::mem::take(free) };
    let t = p.term().and_then(|t| if p.at == p.toks.len() { Ok(t) } else { err(p.pos(), "trailing input") });
    *free = p.free;
    t
}

/// `beta`, `eta`, `reflM`, `reflN`, parentheses, and right-associative `.`.
pub fn parse_witness(text: &str) -> Result<Witness, ParseError> {
    let toks = lex(text)?;
    let mut at = 0;
    let w = witness_expr(&toks, &mut at, text.len())?;
    if at != toks.len() {
        return err(toks[at].0, "trailing input");
    }
    Ok(w)
}

fn witness_expr(toks: &[(usize, Tok)], at: &mut usize, end: usize) -> Result<Witness, ParseError> {
    let pos = toks.get(*at).map_or(end, |t| t.0);
    let head = match toks.get(*at).map(|t| &t.1) {
        Some(Tok::Ident(n)) => {
            *at += 1;
            match n.as_str() {
                "beta" => Witness::TBeta,
                "eta" => Witness::TEta,
                "reflM" => Witness::ReflM,
                "reflN" => Witness::ReflN,
                _ => return err(pos, format!("unknown witness {n}")),
            }
        }
        Some(Tok::Open) => {
            *at += 1;
            let w = witness_expr(toks, at, end)?;
            if toks.get(*at).map(|t| &t.1) != Some(&Tok::Close) {
                return err(toks.get(*at).map_or(end, |t| t.0), "expected ')'");
            }
            *at += 1;
            w
        }
        _ => return err(pos, "expected a witness"),
    };
    if toks.get(*at).map(|t| &t.1) == Some(&Tok::Dot) {
        *at += 1;
        let dot = toks[*at - 1].0;
        let rest = witness_expr(toks, at, end)?;
        return Witness::comp(head, rest).map_err(|e| ParseError { pos: dot, msg: e.to_string() });
    }
    Ok(head)
}
