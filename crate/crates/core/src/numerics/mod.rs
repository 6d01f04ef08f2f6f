//! Fixed-step integration: trajectories, sensitivity matrices, flow tubes and
//! enclosing balls.

mod ball;
mod sensitivity;

use crate::error::{Error, Result};
use crate::procmodel::{Network, Process};

pub use ball::{bounding_ball, bounding_ball_of_balls};
pub use sensitivity::{expansion, sensitivity_trace, sigma_max, tube, SensTrace, TubeTrace};

/// Two sample times closer than this are the same grid point.
pub const TIME_EPS: f64 = 1e-12;

/// Sampling resolution and the largest internal RK4 step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub rho: f64,
    pub h_max: f64,
}

impl Step {
    /// One RK4 step per sample.
    pub fn new(rho: f64) -> Self {
        Step { rho, h_max: rho }
    }

    pub fn with_h_max(rho: f64, h_max: f64) -> Self {
        Step { rho, h_max }
    }

    fn validate(&self, t: f64) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::Config(format!(
                "rho must be positive, got {}",
                self.rho
            )));
        }
        if !(self.h_max > 0.0) {
            return Err(Error::Config(format!(
                "h_max must be positive, got {}",
                self.h_max
            )));
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Config(format!(
                "duration must be finite and >= 0, got {t}"
            )));
        }
        Ok(())
    }
}

/// Sample times `0, ρ, 2ρ, …` up to and including `t`; the last gap may be short.
pub fn sample_times(t: f64, rho: f64) -> Vec<f64> {
    let mut times = Vec::new();
    let mut i = 0u64;
    loop {
        let ti = i as f64 * rho;
        if ti >= t - TIME_EPS {
            break;
        }
        times.push(ti);
        i += 1;
    }
    times.push(t);
    times
}

/// Time-indexed states `(tᵢ, xᵢ)` of one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub rho: f64,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn end(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.times
            .iter()
            .copied()
            .zip(self.states.iter().map(Vec::as_slice))
    }
}

/// Classical RK4 step of `y' = f(y)` in place. `k` holds five scratch vectors.
pub(crate) fn rk4_step<F>(f: &F, y: &mut [f64], h: f64, k: &mut [Vec<f64>; 5])
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = y.len();
    let [k1, k2, k3, k4, tmp] = k;
    f(y, k1);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    f(tmp, k2);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    f(tmp, k3);
    for i in 0..n {
        tmp[i] = y[i] + h * k3[i];
    }
    f(tmp, k4);
    for i in 0..n {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

/// Integrates `y' = f(y)` from `y0` and records `y` at every sample time.
pub(crate) fn integrate<F>(
    f: F,
    y0: &[f64],
    t: f64,
    step: Step,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)>
where
    F: Fn(&[f64], &mut [f64]),
{
    step.validate(t)?;
    if let Some(bad) = y0.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidProcess(format!(
            "non-finite initial state {bad}"
        )));
    }
    let times = sample_times(t, step.rho);
    let n = y0.len();
    let mut scratch: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; n]);
    let mut y = y0.to_vec();
    let mut states = Vec::with_capacity(times.len());
    states.push(y.clone());
    for w in times.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let gap = t1 - t0;
        let substeps = ((gap / step.h_max) - 1e-9).ceil().max(1.0) as usize;
        let h = gap / substeps as f64;
        for s in 0..substeps {
            rk4_step(&f, &mut y, h, &mut scratch);
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::BlowUp(t0 + (s + 1) as f64 * h));
            }
        }
        states.push(y.clone());
    }
    Ok((times, states))
}

/// Trajectory of the network from `x0` over `[0, t]` sampled every `ρ`.
pub fn trace(net: &Network, x0: &[f64], t: f64, step: Step) -> Result<Trace> {
    let (times, states) = integrate(|x, dx| net.vector_field_into(x, dx), x0, t, step)?;
    Ok(Trace {
        rho: step.rho,
        times,
        states,
    })
}

pub fn trace_process(p: &Process, t: f64, step: Step) -> Result<Trace> {
    trace(p.network(), p.conc(), t, step)
}
