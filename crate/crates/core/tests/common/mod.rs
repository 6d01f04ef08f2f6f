//! Random models, formulas and signals shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use ctxcheck::formula::{CmpOp, ValueExpr};
use ctxcheck::{
    Atom, Ball, Formula, Network, NetworkBuilder, Process, Signal3, TimeInterval, Truth,
};
use rand::rngs::StdRng;
use rand::Rng;

pub const NAMES: [&str; 3] = ["A", "B", "C"];

/// A small network whose reactions never create more molecules than they
/// consume (apart from rare constant sources), so trajectories stay bounded.
pub fn random_network(rng: &mut StdRng) -> Arc<Network> {
    let n = rng.random_range(1..=3);
    let m = rng.random_range(1..=4);
    let mut b = NetworkBuilder::new().species(&NAMES[..n]);
    for _ in 0..m {
        let rate = rng.random_range(0.1..1.5);
        if rng.random_bool(0.1) {
            b = b.reaction(&[], &[(NAMES[rng.random_range(0..n)], 1)], rate);
            continue;
        }
        let k = rng.random_range(1..=2u32);
        let mut lhs: Vec<(&str, u32)> = Vec::new();
        for _ in 0..k {
            lhs.push((NAMES[rng.random_range(0..n)], 1));
        }
        let mut rhs: Vec<(&str, u32)> = Vec::new();
        for _ in 0..rng.random_range(0..=k) {
            rhs.push((NAMES[rng.random_range(0..n)], 1));
        }
        b = b.reaction(&lhs, &rhs, rate);
    }
    Arc::new(b.build().expect("valid random network"))
}

pub fn random_state(rng: &mut StdRng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn random_process(rng: &mut StdRng, net: &Arc<Network>, lo: f64, hi: f64) -> Process {
    Process::new(net.clone(), random_state(rng, net.dim(), lo, hi)).unwrap()
}

/// Context process over the same network with a few species raised.
pub fn random_context(rng: &mut StdRng, net: &Arc<Network>) -> Arc<Process> {
    let conc = (0..net.dim())
        .map(|_| {
            if rng.random_bool(0.6) {
                rng.random_range(0.0..1.0)
            } else {
                0.0
            }
        })
        .collect();
    Arc::new(Process::new(net.clone(), conc).unwrap())
}

pub struct FormulaGen<'a> {
    pub species: &'a [String],
    pub contexts: &'a [(String, Arc<Process>)],
}

impl FormulaGen<'_> {
    pub fn atom(&self, rng: &mut StdRng) -> Formula {
        let s = self.species[rng.random_range(0..self.species.len())].clone();
        let op = [CmpOp::Lt, CmpOp::Gt, CmpOp::Le, CmpOp::Ge][rng.random_range(0..4)];
        let a = match rng.random_range(0..10) {
            0 => Atom::True,
            1..=6 => Atom::cmp(
                ValueExpr::Conc(s),
                op,
                ValueExpr::Const(rng.random_range(0.1..2.5)),
            ),
            7 => Atom::cmp(
                ValueExpr::Deriv(s),
                op,
                ValueExpr::Const(rng.random_range(-1.0..1.0)),
            ),
            _ => {
                let t = self.species[rng.random_range(0..self.species.len())].clone();
                let scaled = ValueExpr::bin(
                    ctxcheck::formula::ArithOp::Mul,
                    ValueExpr::Const(rng.random_range(0.5..2.0)),
                    ValueExpr::Conc(t),
                );
                Atom::cmp(ValueExpr::Conc(s), op, scaled)
            }
        };
        Formula::atom(a)
    }

    fn interval(rng: &mut StdRng) -> TimeInterval {
        let lo = [0.0, 0.0, 0.25, 0.5][rng.random_range(0..4)];
        let w = [0.0, 0.25, 0.5, 1.0][rng.random_range(0..4)];
        TimeInterval::new(lo, lo + w).unwrap()
    }

    pub fn formula(&self, rng: &mut StdRng, depth: usize) -> Formula {
        if depth == 0 || rng.random_bool(0.15) {
            return self.atom(rng);
        }
        let d = depth - 1;
        match rng.random_range(0..9) {
            0 => Formula::not(self.formula(rng, d)),
            1 => Formula::and(self.formula(rng, d), self.formula(rng, d)),
            2 => Formula::or(self.formula(rng, d), self.formula(rng, d)),
            3 => Formula::implies(self.formula(rng, d), self.formula(rng, d)),
            4 => Formula::eventually(Self::interval(rng), self.formula(rng, d)),
            5 => Formula::globally(Self::interval(rng), self.formula(rng, d)),
            6 => Formula::until(
                self.formula(rng, d),
                Self::interval(rng),
                self.formula(rng, d),
            ),
            _ if !self.contexts.is_empty() => {
                let (name, q) = &self.contexts[rng.random_range(0..self.contexts.len())];
                Formula::context(name.clone(), q.clone(), self.formula(rng, d))
            }
            _ => Formula::eventually(Self::interval(rng), self.formula(rng, d)),
        }
    }
}

pub fn has_context(f: &Formula) -> bool {
    match f {
        Formula::Atom(_) => false,
        Formula::Context(..) => true,
        Formula::Not(g) | Formula::Eventually(_, g) | Formula::Globally(_, g) => has_context(g),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Until(a, _, b) => has_context(a) || has_context(b),
    }
}

/// Uniform sample from a ball.
pub fn sample_in_ball(rng: &mut StdRng, ball: &Ball) -> Vec<f64> {
    let d = ball.dim();
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 <= 1.0 {
            return ball
                .center
                .iter()
                .zip(&v)
                .map(|(c, x)| c + ball.radius * x)
                .collect();
        }
    }
}

/// Boolean signal as a list of unit cells of width `cell`.
pub fn random_cells(
    rng: &mut StdRng,
    n_cells: usize,
    max_pieces: usize,
    three: bool,
) -> Vec<Truth> {
    let pieces = rng.random_range(1..=max_pieces.min(n_cells));
    let mut cuts: Vec<usize> = (1..n_cells).collect();
    // choose pieces-1 distinct cut points
    for i in 0..cuts.len() {
        let j = rng.random_range(i..cuts.len());
        cuts.swap(i, j);
    }
    let mut cuts: Vec<usize> = cuts.into_iter().take(pieces - 1).collect();
    cuts.sort();
    cuts.push(n_cells);
    let mut cells = Vec::with_capacity(n_cells);
    let mut at = 0;
    for c in cuts {
        let v = match rng.random_range(0..if three { 3 } else { 2 }) {
            0 => Truth::False,
            1 => Truth::True,
            _ => Truth::Unknown,
        };
        cells.extend(std::iter::repeat_n(v, c - at));
        at = c;
    }
    cells
}

pub fn cells_to_signal(cells: &[Truth], cell: f64) -> Signal3 {
    let pieces: Vec<(f64, f64, Truth)> = cells
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64 * cell, (i + 1) as f64 * cell, v))
        .collect();
    Signal3::new(cells.len() as f64 * cell, &pieces).unwrap()
}
