//! Sensitivity to initial conditions and the flow tubes built from it.
//!
//! The sensitivity matrix `S(t) = ∂x(t)/∂x₀` obeys `S' = J(x)·S` with `S(0) = I`.
//! Integrated alongside the state it gives the first-order growth of an
//! initial ball: a radius `ε` around `x₀` maps to radius `ε·σ_max(S(t))`.

use nalgebra::DMatrix;

use super::{integrate, Step};
use crate::error::Result;
use crate::procmodel::{Ball, Network};

#[derive(Debug, Clone, PartialEq)]
pub struct SensTrace {
    pub rho: f64,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub sens: Vec<DMatrix<f64>>,
}

/// Integrates the state together with its sensitivity matrix.
pub fn sensitivity_trace(net: &Network, x0: &[f64], t: f64, step: Step) -> Result<SensTrace> {
    let n = net.dim();
    let mut y0 = x0.to_vec();
    y0.resize(n + n * n, 0.0);
    for i in 0..n {
        y0[n + i * n + i] = 1.0;
    }
    let field = |y: &[f64], dy: &mut [f64]| {
        let (x, s) = y.split_at(n);
        let (dx, ds) = dy.split_at_mut(n);
        net.vector_field_into(x, dx);
        let jac = net.jacobian(x);
        // row-major: ds[i][j] = sum_k J[i][k] * s[k][j]
        for i in 0..n {
            for j in 0..n {
                ds[i * n + j] = (0..n).map(|k| jac[i][k] * s[k * n + j]).sum();
            }
        }
    };
    let (times, ys) = integrate(field, &y0, t, step)?;
    let mut states = Vec::with_capacity(ys.len());
    let mut sens = Vec::with_capacity(ys.len());
    for y in ys {
        sens.push(DMatrix::from_row_slice(n, n, &y[n..]));
        states.push(y[..n].to_vec());
    }
    Ok(SensTrace {
        rho: step.rho,
        times,
        states,
        sens,
    })
}

/// Largest singular value: square root of the top eigenvalue of `SᵀS`.
///
/// A symmetric eigensolver is used instead of power iteration, which stalls
/// (and underestimates) when the top singular values nearly coincide, as they
/// do for `S ≈ I` at short times.
pub fn sigma_max(s: &DMatrix<f64>) -> f64 {
    if s.ncols() == 0 {
        return 0.0;
    }
    let m = s.transpose() * s;
    m.symmetric_eigenvalues().max().max(0.0).sqrt()
}

/// First-order expansion function: `δᵢ = ε·σ_max(S(tᵢ))` at each sample.
pub fn expansion(
    net: &Network,
    x0: &[f64],
    eps: f64,
    t: f64,
    step: Step,
) -> Result<Vec<(f64, f64)>> {
    let st = sensitivity_trace(net, x0, t, step)?;
    Ok(st
        .times
        .iter()
        .zip(&st.sens)
        .map(|(&ti, s)| (ti, if eps == 0.0 { 0.0 } else { eps * sigma_max(s) }))
        .collect())
}

/// Time-indexed balls enclosing (to first order) every trajectory that starts
/// in the initial ball.
#[derive(Debug, Clone, PartialEq)]
pub struct TubeTrace {
    pub rho: f64,
    pub times: Vec<f64>,
    pub balls: Vec<Ball>,
}

impl TubeTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Flow tube from `ball` over `[0, t]`: the spine is the trajectory of the
/// centre and each radius is the expansion of the initial radius.
pub fn tube(net: &Network, ball: &Ball, t: f64, step: Step) -> Result<TubeTrace> {
    let st = sensitivity_trace(net, &ball.center, t, step)?;
    let balls = st
        .states
        .into_iter()
        .zip(&st.sens)
        .map(|(c, s)| {
            let r = if ball.radius == 0.0 {
                0.0
            } else {
                ball.radius * sigma_max(s)
            };
            Ball::new(c, r)
        })
        .collect();
    Ok(TubeTrace {
        rho: st.rho,
        times: st.times,
        balls,
    })
}
