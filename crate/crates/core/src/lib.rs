//! Model checking of temporal formulas with a context modality over
//! continuous-state processes given as mass-action reaction networks.
//!
//! Two engines are provided: a pointwise checker that evaluates every context
//! at every trace sample, and a sensitivity-based checker that groups nearby
//! samples into balls and propagates them as flow tubes.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod checker;
pub mod cli;
pub mod error;
pub mod formula;
pub mod interval;
pub mod numerics;
pub mod procmodel;
pub mod signal;
pub mod truth;

#[cfg(test)]
pub(crate) mod testutil;
pub use checker::{check, CheckConfig, CheckReport, Checker, Mode, Stats};
pub use error::{Error, Result};
pub use formula::{parse_formula, Atom, ContextEnv, Formula, TimeInterval, ValueExpr};
pub use procmodel::{compose, Ball, Network, NetworkBuilder, Process};
pub use signal::Signal3;
pub use truth::{Logic, Truth};
