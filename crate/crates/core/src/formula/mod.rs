//! Formula syntax: arithmetic values, atoms, temporal and context operators.
//!
//! `F` and `G` are kept as first-class nodes rather than desugared into `U`
//! because the signal algebra has dedicated combinators for them.

mod parse;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::procmodel::Process;

pub use parse::{parse_formula, ContextEnv};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Gt,
    Le,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds(self, a: f64, b: f64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Gt => a > b,
            CmpOp::Le => a <= b,
            CmpOp::Ge => a >= b,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValueExpr {
    Const(f64),
    /// `[S]`
    Conc(String),
    /// `[S]'`
    Deriv(String),
    Bin(ArithOp, Box<ValueExpr>, Box<ValueExpr>),
}

impl ValueExpr {
    pub fn bin(op: ArithOp, a: ValueExpr, b: ValueExpr) -> Self {
        ValueExpr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn uses_derivative(&self) -> bool {
        match self {
            ValueExpr::Deriv(_) => true,
            ValueExpr::Bin(_, a, b) => a.uses_derivative() || b.uses_derivative(),
            _ => false,
        }
    }

    fn species<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ValueExpr::Conc(s) | ValueExpr::Deriv(s) => out.push(s),
            ValueExpr::Bin(_, a, b) => {
                a.species(out);
                b.species(out);
            }
            ValueExpr::Const(_) => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Atom {
    True,
    False,
    Cmp(ValueExpr, CmpOp, ValueExpr),
}

impl Atom {
    pub fn cmp(lhs: ValueExpr, op: CmpOp, rhs: ValueExpr) -> Self {
        Atom::Cmp(lhs, op, rhs)
    }

    pub fn uses_derivative(&self) -> bool {
        match self {
            Atom::Cmp(a, _, b) => a.uses_derivative() || b.uses_derivative(),
            _ => false,
        }
    }

    /// Species names referenced by the atom, in order of appearance.
    pub fn species(&self) -> Vec<&str> {
        let mut out = Vec::new();
        if let Atom::Cmp(a, _, b) = self {
            a.species(&mut out);
            b.species(&mut out);
        }
        out
    }
}

/// Closed time interval `[lo, hi]`; `hi` may be infinite until a horizon is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeInterval {
    pub lo: f64,
    pub hi: f64,
}

impl TimeInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0) || !(lo <= hi) || lo.is_infinite() || hi.is_nan() {
            return Err(Error::InvalidInterval(lo, hi));
        }
        Ok(TimeInterval { lo, hi })
    }

    /// `[0, ∞)`
    pub fn unbounded() -> Self {
        TimeInterval {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }
}

/// A named context process, the left operand of `|>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextRef {
    pub name: String,
    pub process: Arc<Process>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Until(Box<Formula>, TimeInterval, Box<Formula>),
    Eventually(TimeInterval, Box<Formula>),
    Globally(TimeInterval, Box<Formula>),
    Context(ContextRef, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn until(a: Formula, i: TimeInterval, b: Formula) -> Self {
        Formula::Until(Box::new(a), i, Box::new(b))
    }

    pub fn eventually(i: TimeInterval, f: Formula) -> Self {
        Formula::Eventually(i, Box::new(f))
    }

    pub fn globally(i: TimeInterval, f: Formula) -> Self {
        Formula::Globally(i, Box::new(f))
    }

    pub fn context(name: impl Into<String>, process: Arc<Process>, f: Formula) -> Self {
        Formula::Context(
            ContextRef {
                name: name.into(),
                process,
            },
            Box::new(f),
        )
    }

    pub fn is_temporal(&self) -> bool {
        matches!(
            self,
            Formula::Until(..) | Formula::Eventually(..) | Formula::Globally(..)
        )
    }

    /// Length of time the formula refers to. Context nodes contribute nothing:
    /// their subformula runs on a fresh trajectory.
    pub fn duration(&self) -> Result<f64> {
        self.span(false)
    }

    /// Total simulated time budget, counting context subformulas.
    pub fn horizon(&self) -> Result<f64> {
        self.span(true)
    }

    fn span(&self, through_context: bool) -> Result<f64> {
        let bound = |i: &TimeInterval| {
            if i.is_bounded() {
                Ok(i.hi)
            } else {
                Err(Error::Unbounded)
            }
        };
        Ok(match self {
            Formula::Atom(_) => 0.0,
            Formula::Not(f) => f.span(through_context)?,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.span(through_context)?.max(b.span(through_context)?)
            }
            Formula::Until(a, i, b) => {
                a.span(through_context)?.max(b.span(through_context)?) + bound(i)?
            }
            Formula::Eventually(i, f) | Formula::Globally(i, f) => {
                f.span(through_context)? + bound(i)?
            }
            Formula::Context(_, f) => {
                if through_context {
                    f.span(true)?
                } else {
                    0.0
                }
            }
        })
    }

    /// Replace every unbounded upper limit by `horizon`.
    pub fn resolve_horizon(self, horizon: f64) -> Formula {
        let fix = |i: TimeInterval| {
            if i.is_bounded() {
                i
            } else {
                TimeInterval {
                    lo: i.lo,
                    hi: horizon.max(i.lo),
                }
            }
        };
        let rec = |f: Box<Formula>| Box::new(f.resolve_horizon(horizon));
        match self {
            Formula::Atom(a) => Formula::Atom(a),
            Formula::Not(f) => Formula::Not(rec(f)),
            Formula::And(a, b) => Formula::And(rec(a), rec(b)),
            Formula::Or(a, b) => Formula::Or(rec(a), rec(b)),
            Formula::Implies(a, b) => Formula::Implies(rec(a), rec(b)),
            Formula::Until(a, i, b) => Formula::Until(rec(a), fix(i), rec(b)),
            Formula::Eventually(i, f) => Formula::Eventually(fix(i), rec(f)),
            Formula::Globally(i, f) => Formula::Globally(fix(i), rec(f)),
            Formula::Context(c, f) => Formula::Context(c, rec(f)),
        }
    }

    /// Nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f)
            | Formula::Eventually(_, f)
            | Formula::Globally(_, f)
            | Formula::Context(_, f) => 1 + f.depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, _, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

// Canonical printer. Every compound node is parenthesised so that the output
// parses back to the same tree.

fn fmt_num(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    write!(f, "{x}")
}

impl fmt::Display for ValueExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueExpr::Const(c) => fmt_num(f, *c),
            ValueExpr::Conc(s) => write!(f, "[{s}]"),
            ValueExpr::Deriv(s) => write!(f, "[{s}]'"),
            ValueExpr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::True => f.write_str("true"),
            Atom::False => f.write_str("false"),
            Atom::Cmp(a, op, b) => write!(f, "{a} {} {b}", op.symbol()),
        }
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a @ (Atom::True | Atom::False)) => write!(f, "{a}"),
            Formula::Atom(a) => write!(f, "({a})"),
            Formula::Not(g) => write!(f, "!{g}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} => {b})"),
            Formula::Until(a, i, b) if i.is_bounded() => write!(f, "({a} U{i} {b})"),
            Formula::Until(a, _, b) => write!(f, "({a} U {b})"),
            Formula::Eventually(i, g) if i.is_bounded() => write!(f, "F{i} {g}"),
            Formula::Eventually(_, g) => write!(f, "F {g}"),
            Formula::Globally(i, g) if i.is_bounded() => write!(f, "G{i} {g}"),
            Formula::Globally(_, g) => write!(f, "G {g}"),
            Formula::Context(c, g) => write!(f, "({} |> {g})", c.name),
        }
    }
}
