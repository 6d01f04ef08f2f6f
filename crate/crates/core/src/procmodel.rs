//! Processes as concentration vectors over a mass-action reaction network.
//!
//! A process is a point in process space: one concentration per species of its
//! network. Composition adds concentrations and unions the species and the
//! reactions of both operands.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::{ArithOp, Atom, ValueExpr};
use crate::interval::Interval;
use crate::truth::Truth;

/// Species names in dimension order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpeciesIndex {
    names: Vec<String>,
    positions: HashMap<String, usize>,
}

impl SpeciesIndex {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut idx = SpeciesIndex::default();
        for n in names {
            let n = n.into();
            if idx.positions.contains_key(&n) {
                return Err(Error::DuplicateSpecies(n));
            }
            idx.push(n);
        }
        Ok(idx)
    }

    fn push(&mut self, name: String) -> usize {
        let i = self.names.len();
        self.positions.insert(name.clone(), i);
        self.names.push(name);
        i
    }

    fn get_or_insert(&mut self, name: &str) -> usize {
        match self.positions.get(name) {
            Some(&i) => i,
            None => self.push(name.to_string()),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.positions.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// A mass-action reaction. Stoichiometry is stored as `(species, coefficient)`
/// pairs sorted by species index with no zero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    reactants: Vec<(usize, u32)>,
    products: Vec<(usize, u32)>,
    rate: f64,
}

fn normalize(mut terms: Vec<(usize, u32)>) -> Vec<(usize, u32)> {
    terms.sort_by_key(|t| t.0);
    let mut out: Vec<(usize, u32)> = Vec::with_capacity(terms.len());
    for (s, k) in terms {
        if k == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.0 == s => last.1 += k,
            _ => out.push((s, k)),
        }
    }
    out
}

impl Reaction {
    pub fn new(
        reactants: Vec<(usize, u32)>,
        products: Vec<(usize, u32)>,
        rate: f64,
    ) -> Result<Self> {
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::InvalidReaction(format!(
                "rate {rate} must be finite and >= 0"
            )));
        }
        let reactants = normalize(reactants);
        let products = normalize(products);
        if reactants.is_empty() && products.is_empty() {
            return Err(Error::InvalidReaction(
                "no reactants and no products".into(),
            ));
        }
        Ok(Reaction {
            reactants,
            products,
            rate,
        })
    }

    pub fn reactants(&self) -> &[(usize, u32)] {
        &self.reactants
    }

    pub fn products(&self) -> &[(usize, u32)] {
        &self.products
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Net change per firing, `(species, products - reactants)`, zeros dropped.
    pub fn net(&self) -> Vec<(usize, f64)> {
        let mut net: Vec<(usize, f64)> = Vec::new();
        let mut add = |s: usize, d: f64| match net.iter_mut().find(|e| e.0 == s) {
            Some(e) => e.1 += d,
            None => net.push((s, d)),
        };
        for &(s, k) in &self.reactants {
            add(s, -(k as f64));
        }
        for &(s, k) in &self.products {
            add(s, k as f64);
        }
        net.retain(|e| e.1 != 0.0);
        net.sort_by_key(|e| e.0);
        net
    }

    fn propensity(&self, x: &[f64]) -> f64 {
        self.reactants
            .iter()
            .fold(self.rate, |acc, &(s, k)| acc * x[s].powi(k as i32))
    }

    fn propensity_range(&self, x: &[Interval]) -> Interval {
        self.reactants
            .iter()
            .fold(Interval::point(self.rate), |acc, &(s, k)| {
                acc * x[s].powi(k)
            })
    }

    fn max_index(&self) -> Option<usize> {
        self.reactants
            .iter()
            .chain(&self.products)
            .map(|t| t.0)
            .max()
    }

    fn remap(&self, map: &[usize]) -> Reaction {
        let f = |v: &[(usize, u32)]| normalize(v.iter().map(|&(s, k)| (map[s], k)).collect());
        Reaction {
            reactants: f(&self.reactants),
            products: f(&self.products),
            rate: self.rate,
        }
    }
}

/// Species plus the reactions among them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Network {
    species: SpeciesIndex,
    reactions: Vec<Reaction>,
    // per-reaction net stoichiometry, cached for the vector field
    net: Vec<Vec<(usize, f64)>>,
}

impl Network {
    pub fn new(species: SpeciesIndex, reactions: Vec<Reaction>) -> Result<Self> {
        let n = species.len();
        for r in &reactions {
            if let Some(m) = r.max_index() {
                if m >= n {
                    return Err(Error::InvalidReaction(format!(
                        "species index {m} out of range for {n} species"
                    )));
                }
            }
        }
        let mut uniq: Vec<Reaction> = Vec::with_capacity(reactions.len());
        for r in reactions {
            if !uniq.contains(&r) {
                uniq.push(r);
            }
        }
        let net = uniq.iter().map(Reaction::net).collect();
        Ok(Network {
            species,
            reactions: uniq,
            net,
        })
    }

    pub fn species(&self) -> &SpeciesIndex {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn dim(&self) -> usize {
        self.species.len()
    }

    /// Union of both networks: `self`'s species keep their indices, `other`'s
    /// new species are appended. Also returns where each of `other`'s species
    /// landed.
    pub fn merge(&self, other: &Network) -> (Network, Vec<usize>) {
        let mut species = self.species.clone();
        let map: Vec<usize> = other
            .species
            .names()
            .iter()
            .map(|n| species.get_or_insert(n))
            .collect();
        let mut reactions = self.reactions.clone();
        reactions.extend(other.reactions.iter().map(|r| r.remap(&map)));
        let merged = Network::new(species, reactions).expect("merged indices are in range");
        (merged, map)
    }

    /// Mass-action vector field `dx/dt`.
    pub fn vector_field(&self, x: &[f64]) -> Vec<f64> {
        let mut dx = vec![0.0; self.dim()];
        self.vector_field_into(x, &mut dx);
        dx
    }

    pub fn vector_field_into(&self, x: &[f64], dx: &mut [f64]) {
        dx.iter_mut().for_each(|d| *d = 0.0);
        for (r, net) in self.reactions.iter().zip(&self.net) {
            let a = r.propensity(x);
            for &(s, d) in net {
                dx[s] += d * a;
            }
        }
    }

    /// Analytic Jacobian of the vector field, row-major `J[i][j] = ∂f_i/∂x_j`.
    pub fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut jac = vec![vec![0.0; n]; n];
        for (r, net) in self.reactions.iter().zip(&self.net) {
            for (pos, &(j, kj)) in r.reactants.iter().enumerate() {
                // d/dx_j of rate * prod x_s^k_s
                let mut g = r.rate * kj as f64 * x[j].powi(kj as i32 - 1);
                for (other, &(s, k)) in r.reactants.iter().enumerate() {
                    if other != pos {
                        g *= x[s].powi(k as i32);
                    }
                }
                for &(i, d) in net {
                    jac[i][j] += d * g;
                }
            }
        }
        jac
    }

    /// Interval enclosure of the vector field over a box.
    pub fn vector_field_range(&self, x: &[Interval]) -> Vec<Interval> {
        let mut dx = vec![Interval::point(0.0); self.dim()];
        for (r, net) in self.reactions.iter().zip(&self.net) {
            let a = r.propensity_range(x);
            for &(s, d) in net {
                dx[s] = dx[s] + a.scale(d);
            }
        }
        dx
    }
}

type NamedReaction = (Vec<(String, u32)>, Vec<(String, u32)>, f64);

/// Convenience builder for networks written with species names.
#[derive(Debug, Default)]
pub struct NetworkBuilder {
    species: SpeciesIndex,
    reactions: Vec<NamedReaction>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn species(mut self, names: &[&str]) -> Self {
        for n in names {
            self.species.get_or_insert(n);
        }
        self
    }

    /// Adds a reaction; unseen species are declared on the fly.
    pub fn reaction(
        mut self,
        reactants: &[(&str, u32)],
        products: &[(&str, u32)],
        rate: f64,
    ) -> Self {
        let own = |v: &[(&str, u32)]| v.iter().map(|&(s, k)| (s.to_string(), k)).collect();
        for (s, _) in reactants.iter().chain(products) {
            self.species.get_or_insert(s);
        }
        self.reactions.push((own(reactants), own(products), rate));
        self
    }

    pub fn build(self) -> Result<Network> {
        let idx = &self.species;
        let resolve = |v: &[(String, u32)]| -> Vec<(usize, u32)> {
            v.iter()
                .map(|(s, k)| (idx.position(s).unwrap(), *k))
                .collect()
        };
        let reactions = self
            .reactions
            .iter()
            .map(|(r, p, k)| Reaction::new(resolve(r), resolve(p), *k))
            .collect::<Result<Vec<_>>>()?;
        Network::new(self.species, reactions)
    }
}

/// A mixture: concentrations over the species of `network`.
#[derive(Debug, Clone, PartialEq)]
pub struct Process {
    network: Arc<Network>,
    conc: Vec<f64>,
}

impl Process {
    pub fn new(network: Arc<Network>, conc: Vec<f64>) -> Result<Self> {
        if conc.len() != network.dim() {
            return Err(Error::InvalidProcess(format!(
                "{} concentrations for {} species",
                conc.len(),
                network.dim()
            )));
        }
        if let Some(c) = conc.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(Error::InvalidProcess(format!(
                "concentration {c} is not a finite non-negative number"
            )));
        }
        Ok(Process { network, conc })
    }

    /// The process with no species at all; identity of composition.
    pub fn empty() -> Self {
        Process {
            network: Arc::new(Network::default()),
            conc: Vec::new(),
        }
    }

    /// Concentrations by name; unnamed species of `network` are zero.
    pub fn from_pairs(network: Arc<Network>, pairs: &[(&str, f64)]) -> Result<Self> {
        let mut conc = vec![0.0; network.dim()];
        for &(s, c) in pairs {
            let i = network
                .species()
                .position(s)
                .ok_or_else(|| Error::UnknownSpecies(s.to_string()))?;
            conc[i] = c;
        }
        Process::new(network, conc)
    }

    pub fn network(&self) -> &Arc<Network> {
        &self.network
    }

    pub fn conc(&self) -> &[f64] {
        &self.conc
    }

    pub fn get(&self, species: &str) -> Option<f64> {
        self.network
            .species()
            .position(species)
            .map(|i| self.conc[i])
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.conc.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:{}", self.network.species().name(i), c)?;
        }
        f.write_str("}")
    }
}

/// Euclidean ball in process space.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Ball { center, radius }
    }

    pub fn point(center: Vec<f64>) -> Self {
        Ball {
            center,
            radius: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains(&self, x: &[f64], slack: f64) -> bool {
        distance(&self.center, x) <= self.radius + slack
    }

    /// Axis-aligned box enclosing the ball.
    pub fn bounding_box(&self) -> Vec<Interval> {
        self.center
            .iter()
            .map(|&c| Interval::new(c - self.radius, c + self.radius))
            .collect()
    }
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// The effect of composing states of one network with a fixed context process.
///
/// Built once per context node and then applied to many points or balls.
#[derive(Debug, Clone)]
pub struct Composition {
    network: Arc<Network>,
    offset: Vec<f64>,
    base_dim: usize,
}

impl Composition {
    pub fn new(base: &Arc<Network>, ctx: &Process) -> Self {
        let (network, map) = if **base == **ctx.network() {
            (base.clone(), (0..base.dim()).collect())
        } else {
            let (merged, map) = base.merge(ctx.network());
            (Arc::new(merged), map)
        };
        let mut offset = vec![0.0; network.dim()];
        for (i, &m) in map.iter().enumerate() {
            offset[m] += ctx.conc[i];
        }
        Composition {
            network,
            offset,
            base_dim: base.dim(),
        }
    }

    pub fn network(&self) -> &Arc<Network> {
        &self.network
    }

    /// `x ∥ Q` for a state `x` of the base network.
    pub fn point(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.base_dim);
        let mut out = self.offset.clone();
        for (o, v) in out.iter_mut().zip(x) {
            *o += v;
        }
        out
    }

    /// `β ∥ Q`: the ball translated by the context's concentrations.
    pub fn ball(&self, b: &Ball) -> Ball {
        Ball::new(self.point(&b.center), b.radius)
    }
}

/// `P ∥ Q`
pub fn compose(p: &Process, q: &Process) -> Process {
    let c = Composition::new(&p.network, q);
    Process {
        conc: c.point(&p.conc),
        network: c.network,
    }
}

/// `β ∥ Q` for a ball over `network`; also returns the composed network.
pub fn translate_ball(ball: &Ball, network: &Arc<Network>, q: &Process) -> (Ball, Arc<Network>) {
    let c = Composition::new(network, q);
    (c.ball(ball), c.network)
}

fn species_pos(net: &Network, s: &str) -> Result<usize> {
    net.species()
        .position(s)
        .ok_or_else(|| Error::UnknownSpecies(s.to_string()))
}

/// Evaluates a value at state `x` with derivative `dx = f(x)`.
pub fn eval_value(v: &ValueExpr, net: &Network, x: &[f64], dx: &[f64]) -> Result<f64> {
    Ok(match v {
        ValueExpr::Const(c) => *c,
        ValueExpr::Conc(s) => x[species_pos(net, s)?],
        ValueExpr::Deriv(s) => dx[species_pos(net, s)?],
        ValueExpr::Bin(op, a, b) => {
            let a = eval_value(a, net, x, dx)?;
            let b = eval_value(b, net, x, dx)?;
            match op {
                ArithOp::Add => a + b,
                ArithOp::Sub => a - b,
                ArithOp::Mul => a * b,
                ArithOp::Div => {
                    if b == 0.0 {
                        return Err(Error::DivisionByZero(v.to_string()));
                    }
                    a / b
                }
            }
        }
    })
}

pub fn eval_atom(a: &Atom, net: &Network, x: &[f64], dx: &[f64]) -> Result<bool> {
    match a {
        Atom::True => Ok(true),
        Atom::False => Ok(false),
        Atom::Cmp(l, op, r) => Ok(op.holds(eval_value(l, net, x, dx)?, eval_value(r, net, x, dx)?)),
    }
}

/// Evaluates an atom at a single state, computing the derivative only if needed.
pub fn atom_holds(a: &Atom, net: &Network, x: &[f64]) -> Result<bool> {
    if a.uses_derivative() {
        let dx = net.vector_field(x);
        eval_atom(a, net, x, &dx)
    } else {
        eval_atom(a, net, x, &[])
    }
}

fn value_range(
    v: &ValueExpr,
    net: &Network,
    x: &[Interval],
    dx: &[Interval],
) -> Result<Option<Interval>> {
    Ok(match v {
        ValueExpr::Const(c) => Some(Interval::point(*c)),
        ValueExpr::Conc(s) => Some(x[species_pos(net, s)?]),
        ValueExpr::Deriv(s) => Some(dx[species_pos(net, s)?]),
        ValueExpr::Bin(op, a, b) => {
            let (Some(a), Some(b)) = (value_range(a, net, x, dx)?, value_range(b, net, x, dx)?)
            else {
                return Ok(None);
            };
            match op {
                ArithOp::Add => Some(a + b),
                ArithOp::Sub => Some(a - b),
                ArithOp::Mul => Some(a * b),
                ArithOp::Div => a.checked_div(b),
            }
        }
    })
}

/// Decides an atom over a whole ball by interval evaluation on its bounding
/// box: `True` if it holds everywhere, `False` if nowhere, `Unknown` otherwise.
pub fn atom_range(a: &Atom, net: &Network, ball: &Ball) -> Result<Truth> {
    let (l, op, r) = match a {
        Atom::True => return Ok(Truth::True),
        Atom::False => return Ok(Truth::False),
        Atom::Cmp(l, op, r) => (l, op, r),
    };
    let bx = ball.bounding_box();
    let dbx = if a.uses_derivative() {
        net.vector_field_range(&bx)
    } else {
        Vec::new()
    };
    let (Some(l), Some(r)) = (
        value_range(l, net, &bx, &dbx)?,
        value_range(r, net, &bx, &dbx)?,
    ) else {
        return Ok(Truth::Unknown);
    };
    if !l.is_finite() || !r.is_finite() {
        return Ok(Truth::Unknown);
    }
    use crate::formula::CmpOp::*;
    let (always, never) = match op {
        Lt => (l.hi < r.lo, l.lo >= r.hi),
        Le => (l.hi <= r.lo, l.lo > r.hi),
        Gt => (l.lo > r.hi, l.hi <= r.lo),
        Ge => (l.lo >= r.hi, l.hi < r.lo),
    };
    Ok(if always {
        Truth::True
    } else if never {
        Truth::False
    } else {
        Truth::Unknown
    })
}
