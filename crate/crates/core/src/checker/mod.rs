//! The two checking engines.
//!
//! Both evaluate a formula along a single trajectory of the process. They
//! differ only at context nodes: the pointwise engine checks the context at
//! every trace sample, the sensitive engine groups samples into bounding balls
//! and decides a whole group at once through a flow tube, bisecting the group
//! when the tube is inconclusive.

use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::formula::{ContextRef, Formula};
use crate::numerics::{bounding_ball, bounding_ball_of_balls, trace, tube, Step, Trace, TubeTrace};
use crate::procmodel::{atom_holds, atom_range, Ball, Composition, Network, Process};
use crate::signal::Signal3;
use crate::truth::{Logic, Truth};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    Pointwise,
    #[default]
    Sensitive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    /// Sampling resolution of traces, tubes and signals.
    pub rho: f64,
    /// Largest initial ball radius a tube is built for.
    pub theta: f64,
    /// Upper limit substituted for unbounded temporal operators.
    pub horizon: f64,
    pub mode: Mode,
    pub logic: Logic,
    /// Largest internal integration step; `rho` when unset.
    pub h_max: Option<f64>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            rho: 0.01,
            theta: 0.05,
            horizon: 10.0,
            mode: Mode::Sensitive,
            logic: Logic::Kleene,
            h_max: None,
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::Config(format!(
                "rho must be positive, got {}",
                self.rho
            )));
        }
        if !(self.theta > 0.0) {
            return Err(Error::Config(format!(
                "theta must be positive, got {}",
                self.theta
            )));
        }
        if !(self.horizon >= 0.0) || !self.horizon.is_finite() {
            return Err(Error::Config(format!(
                "horizon must be finite and >= 0, got {}",
                self.horizon
            )));
        }
        if let Some(h) = self.h_max {
            if !(h > 0.0) {
                return Err(Error::Config(format!("h_max must be positive, got {h}")));
            }
        }
        Ok(())
    }

    pub fn step(&self) -> Step {
        Step::with_h_max(self.rho, self.h_max.unwrap_or(self.rho))
    }
}

/// Work counters accumulated by a [`Checker`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Stats {
    /// Integration runs: traces, sensitivity traces and tube spines.
    pub solver_calls: u64,
    /// Tubes built (each also counted as a solver call).
    pub tube_calls: u64,
    /// Ball checks issued by context bisection.
    pub ball_checks: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub verdict: Truth,
    pub signal: Signal3,
    pub solver_calls: u64,
    pub tube_calls: u64,
    pub wall_ms: u64,
}

/// Sample-wise evidence along one trajectory: exact states or tube balls.
#[derive(Clone, Copy)]
enum Samples<'a> {
    Points(&'a Trace),
    Balls(&'a TubeTrace),
}

impl Samples<'_> {
    fn times(&self) -> &[f64] {
        match self {
            Samples::Points(t) => &t.times,
            Samples::Balls(t) => &t.times,
        }
    }

    fn rho(&self) -> f64 {
        match self {
            Samples::Points(t) => t.rho,
            Samples::Balls(t) => t.rho,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Checker {
    cfg: CheckConfig,
    stats: Stats,
}

impl Checker {
    pub fn new(cfg: CheckConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Checker {
            cfg,
            stats: Stats::default(),
        })
    }

    pub fn config(&self) -> &CheckConfig {
        &self.cfg
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    pub fn reset_stats(&mut self) {
        self.stats = Stats::default();
    }

    /// Checks `phi` at time 0 of `p`, resolving unbounded operators first.
    pub fn check(&mut self, p: &Process, phi: &Formula) -> Result<CheckReport> {
        let start = Instant::now();
        let before = self.stats;
        let phi = phi.clone().resolve_horizon(self.cfg.horizon);
        let t = phi.duration()?;
        let signal = self.signal_of(p, t, &phi)?;
        let verdict = signal.value_at(0.0)?;
        Ok(CheckReport {
            verdict,
            signal,
            solver_calls: self.stats.solver_calls - before.solver_calls,
            tube_calls: self.stats.tube_calls - before.tube_calls,
            wall_ms: start.elapsed().as_millis() as u64,
        })
    }

    /// Whether `p` satisfies `phi` at time 0.
    pub fn sat(&mut self, p: &Process, phi: &Formula) -> Result<bool> {
        self.sat_state(p.network(), p.conc(), phi)
    }

    fn sat_state(&mut self, net: &Arc<Network>, x: &[f64], phi: &Formula) -> Result<bool> {
        Ok(match phi {
            Formula::Atom(a) => atom_holds(a, net, x)?,
            Formula::Not(f) => !self.sat_state(net, x, f)?,
            Formula::And(a, b) => self.sat_state(net, x, a)? && self.sat_state(net, x, b)?,
            Formula::Or(a, b) => self.sat_state(net, x, a)? || self.sat_state(net, x, b)?,
            Formula::Implies(a, b) => !self.sat_state(net, x, a)? || self.sat_state(net, x, b)?,
            Formula::Context(q, f) => {
                let c = Composition::new(net, &q.process);
                self.sat_state(c.network(), &c.point(x), f)?
            }
            Formula::Until(..) | Formula::Eventually(..) | Formula::Globally(..) => {
                let tr = self.trace(net, x, phi.duration()?)?;
                let s = self.signal_over(Samples::Points(&tr), net, phi)?;
                s.value_at(0.0)? == Truth::True
            }
        })
    }

    /// Satisfaction signal of `phi` along the trajectory of `p` over `[0, t]`.
    ///
    /// The signal covers `[0, t + ρ)`: the last sample is held for one step.
    pub fn signal_of(&mut self, p: &Process, t: f64, phi: &Formula) -> Result<Signal3> {
        let tr = self.trace(p.network(), p.conc(), t)?;
        self.signal_over(Samples::Points(&tr), p.network(), phi)
    }

    /// Decides `phi` for every point of `ball` at once, or returns `Unknown`.
    pub fn sat_ball(&mut self, ball: &Ball, net: &Arc<Network>, phi: &Formula) -> Result<Truth> {
        let logic = self.cfg.logic;
        Ok(match phi {
            Formula::Atom(a) => atom_range(a, net, ball)?,
            Formula::Not(f) => self.sat_ball(ball, net, f)?.not(),
            Formula::And(a, b) => {
                let x = self.sat_ball(ball, net, a)?;
                if x == Truth::False && logic == Logic::Kleene {
                    return Ok(Truth::False);
                }
                x.and(self.sat_ball(ball, net, b)?, logic)
            }
            Formula::Or(a, b) => {
                let x = self.sat_ball(ball, net, a)?;
                if x == Truth::True && logic == Logic::Kleene {
                    return Ok(Truth::True);
                }
                x.or(self.sat_ball(ball, net, b)?, logic)
            }
            Formula::Implies(a, b) => {
                let x = self.sat_ball(ball, net, a)?;
                if x == Truth::False && logic == Logic::Kleene {
                    return Ok(Truth::True);
                }
                x.implies(self.sat_ball(ball, net, b)?, logic)
            }
            Formula::Context(q, f) => {
                let c = Composition::new(net, &q.process);
                self.sat_ball(&c.ball(ball), c.network(), f)?
            }
            Formula::Until(..) | Formula::Eventually(..) | Formula::Globally(..) => {
                if ball.radius > self.cfg.theta {
                    return Ok(Truth::Unknown);
                }
                let tb = self.tube(net, ball, phi.duration()?)?;
                self.signal_over(Samples::Balls(&tb), net, phi)?
                    .value_at(0.0)?
            }
        })
    }

    fn trace(&mut self, net: &Network, x: &[f64], t: f64) -> Result<Trace> {
        if t > 0.0 {
            self.stats.solver_calls += 1;
        }
        trace(net, x, t, self.cfg.step())
    }

    fn tube(&mut self, net: &Network, ball: &Ball, t: f64) -> Result<TubeTrace> {
        if t > 0.0 {
            self.stats.solver_calls += 1;
            self.stats.tube_calls += 1;
        }
        tube(net, ball, t, self.cfg.step())
    }

    fn signal_over(&mut self, src: Samples, net: &Arc<Network>, phi: &Formula) -> Result<Signal3> {
        let logic = self.cfg.logic;
        match phi {
            Formula::Atom(a) => {
                let values = match src {
                    Samples::Points(tr) => tr
                        .states
                        .iter()
                        .map(|x| atom_holds(a, net, x).map(Truth::from_bool))
                        .collect::<Result<Vec<_>>>()?,
                    Samples::Balls(tb) => tb
                        .balls
                        .iter()
                        .map(|b| atom_range(a, net, b))
                        .collect::<Result<Vec<_>>>()?,
                };
                Ok(Signal3::from_samples(src.times(), &values, src.rho()))
            }
            Formula::Not(f) => Ok(self.signal_over(src, net, f)?.negate()),
            Formula::And(a, b) => {
                let sa = self.signal_over(src, net, a)?;
                sa.conjoin(&self.signal_over(src, net, b)?, logic)
            }
            Formula::Or(a, b) => {
                let sa = self.signal_over(src, net, a)?;
                sa.disjoin(&self.signal_over(src, net, b)?, logic)
            }
            Formula::Implies(a, b) => {
                let sa = self.signal_over(src, net, a)?;
                sa.implies(&self.signal_over(src, net, b)?, logic)
            }
            Formula::Until(a, i, b) => {
                let sa = self.signal_over(src, net, a)?;
                sa.until(&self.signal_over(src, net, b)?, i.lo, i.hi, logic)
            }
            Formula::Eventually(i, f) => self.signal_over(src, net, f)?.eventually(i.lo, i.hi),
            Formula::Globally(i, f) => self.signal_over(src, net, f)?.globally(i.lo, i.hi),
            Formula::Context(q, f) => {
                let values = match (src, self.cfg.mode) {
                    (Samples::Points(tr), Mode::Pointwise) => {
                        self.context_pointwise(tr, net, q, f)?
                    }
                    (Samples::Points(tr), Mode::Sensitive) => {
                        self.context_sensitive(tr, net, q, f)?
                    }
                    (Samples::Balls(tb), _) => self.context_tube(tb, net, q, f)?,
                };
                Ok(Signal3::from_samples(src.times(), &values, src.rho()))
            }
        }
    }

    /// `sat(xᵢ ∥ Q, φ)` at every sample.
    fn context_pointwise(
        &mut self,
        tr: &Trace,
        net: &Arc<Network>,
        q: &ContextRef,
        f: &Formula,
    ) -> Result<Vec<Truth>> {
        let c = Composition::new(net, &q.process);
        tr.states
            .iter()
            .map(|x| {
                Ok(Truth::from_bool(self.sat_state(
                    c.network(),
                    &c.point(x),
                    f,
                )?))
            })
            .collect()
    }

    /// Bisection over sample segments: a segment whose bounding ball is decided
    /// by `sat_ball` is labelled as a whole, a single sample is checked exactly.
    fn context_sensitive(
        &mut self,
        tr: &Trace,
        net: &Arc<Network>,
        q: &ContextRef,
        f: &Formula,
    ) -> Result<Vec<Truth>> {
        let c = Composition::new(net, &q.process);
        let mut out = vec![Truth::Unknown; tr.len()];
        let mut stack = vec![(0, tr.len() - 1)];
        while let Some((lo, hi)) = stack.pop() {
            if lo == hi {
                out[lo] =
                    Truth::from_bool(self.sat_state(c.network(), &c.point(&tr.states[lo]), f)?);
                continue;
            }
            let ball = c.ball(&bounding_ball(&tr.states[lo..=hi])?);
            self.stats.ball_checks += 1;
            let v = self.sat_ball(&ball, c.network(), f)?;
            if v.is_definite() {
                out[lo..=hi].fill(v);
            } else {
                let mid = lo + (hi - lo) / 2;
                stack.push((mid + 1, hi));
                stack.push((lo, mid));
            }
        }
        Ok(out)
    }

    /// As [`Self::context_sensitive`] over tube balls; a single ball may stay
    /// undecided.
    fn context_tube(
        &mut self,
        tb: &TubeTrace,
        net: &Arc<Network>,
        q: &ContextRef,
        f: &Formula,
    ) -> Result<Vec<Truth>> {
        let c = Composition::new(net, &q.process);
        let mut out = vec![Truth::Unknown; tb.len()];
        let mut stack = vec![(0, tb.len() - 1)];
        while let Some((lo, hi)) = stack.pop() {
            let ball = c.ball(&bounding_ball_of_balls(&tb.balls[lo..=hi])?);
            self.stats.ball_checks += 1;
            let v = self.sat_ball(&ball, c.network(), f)?;
            if v.is_definite() || lo == hi {
                out[lo..=hi].fill(v);
            } else {
                let mid = lo + (hi - lo) / 2;
                stack.push((mid + 1, hi));
                stack.push((lo, mid));
            }
        }
        Ok(out)
    }
}

/// One-shot check with a fresh [`Checker`].
pub fn check(p: &Process, phi: &Formula, cfg: CheckConfig) -> Result<CheckReport> {
    Checker::new(cfg)?.check(p, phi)
}
