//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := imp
//! imp     := or ("=>" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "F" interval? unary | "G" interval? unary | atomexp
//! atomexp := "(" formula ("U" interval? formula)? ")" | atom | ident "|>" unary
//! atom    := "true" | "false" | val cmp val
//! val     := number | "[" ident "]" "'"? | "d[" ident "]" | val op val | "(" val ")"
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{ArithOp, Atom, CmpOp, ContextRef, Formula, TimeInterval, ValueExpr};
use crate::error::{Error, Result};
use crate::procmodel::Process;

/// Names a formula may refer to: species and context processes.
#[derive(Debug, Clone, Default)]
pub struct ContextEnv {
    species: BTreeSet<String>,
    contexts: BTreeMap<String, Arc<Process>>,
}

impl ContextEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_species<I, S>(species: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ContextEnv {
            species: species.into_iter().map(Into::into).collect(),
            contexts: BTreeMap::new(),
        }
    }

    pub fn add_species(&mut self, name: impl Into<String>) {
        self.species.insert(name.into());
    }

    /// Registers a context; its species become referable too.
    pub fn add_context(&mut self, name: impl Into<String>, process: Arc<Process>) {
        for s in process.network().species().names() {
            self.species.insert(s.clone());
        }
        self.contexts.insert(name.into(), process);
    }

    pub fn context(&self, name: &str) -> Option<&Arc<Process>> {
        self.contexts.get(name)
    }

    pub fn has_species(&self, name: &str) -> bool {
        self.species.contains(name)
    }
}

/// Parses `text`. Unbounded temporal operators become `[0, horizon]` when a
/// horizon is given and stay unbounded otherwise.
pub fn parse_formula(text: &str, env: &ContextEnv, horizon: Option<f64>) -> Result<Formula> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        env,
        end: text.len(),
    };
    let f = p.formula()?;
    if !p.at(&Tok::End) {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(match horizon {
        Some(h) => f.resolve_horizon(h),
        None => f,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Prime,
    Bang,
    Amp,
    Pipe,
    Implies,
    Ctx,
    Lt,
    Gt,
    Le,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = |s: &str| text[i..].starts_with(s);
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'\'' => Tok::Prime,
            b'!' => Tok::Bang,
            b'&' => Tok::Amp,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'|' if two("|>") => {
                i += 1;
                Tok::Ctx
            }
            b'|' => Tok::Pipe,
            b'=' if two("=>") => {
                i += 1;
                Tok::Implies
            }
            b'<' if two("<=") => {
                i += 1;
                Tok::Le
            }
            b'>' if two(">=") => {
                i += 1;
                Tok::Ge
            }
            b'<' => Tok::Lt,
            b'>' => Tok::Gt,
            b'0'..=b'9' | b'.' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let lit = &text[i..j];
                let v: f64 = lit.parse().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: format!("bad number `{lit}`"),
                })?;
                i = j;
                out.push((Tok::Num(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                out.push((Tok::Ident(text[i..j].to_string()), start));
                i = j;
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    env: &'a ContextEnv,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].0
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn at_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.offset(),
            msg: msg.to_string(),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.and()?;
            f = Formula::or(f, rhs);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            f = Formula::and(f, rhs);
        }
        Ok(f)
    }

    /// `F`/`G` are operators unless used as a context name.
    fn at_temporal(&self, name: &str) -> bool {
        self.at_ident(name) && self.peek_at(1) != &Tok::Ctx
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Bang) {
            return Ok(Formula::not(self.unary()?));
        }
        if self.at_temporal("F") {
            self.bump();
            let i = self.opt_interval()?;
            return Ok(Formula::eventually(i, self.unary()?));
        }
        if self.at_temporal("G") {
            self.bump();
            let i = self.opt_interval()?;
            return Ok(Formula::globally(i, self.unary()?));
        }
        self.atomexp()
    }

    fn opt_interval(&mut self) -> Result<TimeInterval> {
        let is_interval =
            self.at(&Tok::LBrack) && matches!(self.peek_at(1), Tok::Num(_) | Tok::Minus);
        if !is_interval {
            return Ok(TimeInterval::unbounded());
        }
        let start = self.offset();
        self.bump();
        let lo = self.number()?;
        self.expect(&Tok::Comma, "`,` in interval")?;
        let hi = self.number()?;
        self.expect(&Tok::RBrack, "`]` closing interval")?;
        TimeInterval::new(lo, hi).map_err(|_| Error::Syntax {
            pos: start,
            msg: format!("invalid interval [{lo},{hi}]"),
        })
    }

    fn number(&mut self) -> Result<f64> {
        let neg = self.eat(&Tok::Minus);
        match self.bump() {
            Tok::Num(v) => Ok(if neg { -v } else { v }),
            _ => {
                self.pos -= 1;
                Err(self.error("expected number"))
            }
        }
    }

    fn atomexp(&mut self) -> Result<Formula> {
        if let Tok::Ident(name) = self.peek().clone() {
            if self.peek_at(1) == &Tok::Ctx {
                let start = self.offset();
                self.bump();
                self.bump();
                let process = self
                    .env
                    .context(&name)
                    .cloned()
                    .ok_or_else(|| Error::Syntax {
                        pos: start,
                        msg: format!("unknown context `{name}`"),
                    })?;
                let body = self.unary()?;
                return Ok(Formula::Context(
                    ContextRef { name, process },
                    Box::new(body),
                ));
            }
        }
        if self.at(&Tok::LParen) {
            // A parenthesis opens either a value (`([A]+1) > 2`) or a formula.
            let save = self.pos;
            match self.atom() {
                Ok(a) => return Ok(Formula::Atom(a)),
                Err(Error::Syntax { .. }) => self.pos = save,
                Err(e) => return Err(e),
            }
            self.bump();
            let lhs = self.formula()?;
            if self.at_ident("U") {
                self.bump();
                let i = self.opt_interval()?;
                let rhs = self.formula()?;
                self.expect(&Tok::RParen, "`)`")?;
                return Ok(Formula::until(lhs, i, rhs));
            }
            self.expect(&Tok::RParen, "`)`")?;
            return Ok(lhs);
        }
        Ok(Formula::Atom(self.atom()?))
    }

    fn atom(&mut self) -> Result<Atom> {
        if let Tok::Ident(s) = self.peek() {
            match s.as_str() {
                "true" | "True" => {
                    self.bump();
                    return Ok(Atom::True);
                }
                "false" | "False" => {
                    self.bump();
                    return Ok(Atom::False);
                }
                _ => {}
            }
        }
        let lhs = self.val()?;
        let op = match self.peek() {
            Tok::Lt => CmpOp::Lt,
            Tok::Gt => CmpOp::Gt,
            Tok::Le => CmpOp::Le,
            Tok::Ge => CmpOp::Ge,
            _ => return Err(self.error("expected comparison operator")),
        };
        self.bump();
        let rhs = self.val()?;
        Ok(Atom::Cmp(lhs, op, rhs))
    }

    fn val(&mut self) -> Result<ValueExpr> {
        let mut v = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(v),
            };
            self.bump();
            v = ValueExpr::bin(op, v, self.term()?);
        }
    }

    fn term(&mut self) -> Result<ValueExpr> {
        let mut v = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ArithOp::Mul,
                Tok::Slash => ArithOp::Div,
                _ => return Ok(v),
            };
            self.bump();
            v = ValueExpr::bin(op, v, self.factor()?);
        }
    }

    fn factor(&mut self) -> Result<ValueExpr> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(ValueExpr::Const(v))
            }
            Tok::Minus => {
                self.bump();
                Ok(match self.factor()? {
                    ValueExpr::Const(c) => ValueExpr::Const(-c),
                    v => ValueExpr::bin(ArithOp::Sub, ValueExpr::Const(0.0), v),
                })
            }
            Tok::LParen => {
                self.bump();
                let v = self.val()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(v)
            }
            Tok::LBrack => {
                let name = self.species_ref()?;
                if self.eat(&Tok::Prime) {
                    Ok(ValueExpr::Deriv(name))
                } else {
                    Ok(ValueExpr::Conc(name))
                }
            }
            Tok::Ident(d) if d == "d" && self.peek_at(1) == &Tok::LBrack => {
                self.bump();
                Ok(ValueExpr::Deriv(self.species_ref()?))
            }
            _ => Err(self.error("expected value")),
        }
    }

    fn species_ref(&mut self) -> Result<String> {
        self.expect(&Tok::LBrack, "`[`")?;
        let start = self.offset();
        let name = match self.bump() {
            Tok::Ident(s) => s,
            _ => {
                self.pos -= 1;
                return Err(self.error("expected species name"));
            }
        };
        self.expect(&Tok::RBrack, "`]`")?;
        if !self.env.has_species(&name) {
            return Err(Error::Syntax {
                pos: start,
                msg: format!("unknown species `{name}`"),
            });
        }
        Ok(name)
    }
}
