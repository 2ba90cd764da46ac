//! Joint maintenance and production scheduling for multi-unit plants with
//! linear degradation dynamics.
//!
//! The distributed scheduler combines a receding-horizon loop, Benders
//! decomposition of the per-window mixed-integer program (binary maintenance
//! in the master, continuous production in the sub-problem), and dual
//! decomposition of the sub-problem so each unit optimizes independently
//! against a demand price. Centralized solvers and a brute-force oracle are
//! included for verification and benchmarking.

pub mod agent;
pub mod baselines;
pub mod benders;
pub mod cuts;
pub mod dual;
pub mod feasibility;
pub mod master;
pub mod model;
pub mod mpc;
pub mod verify;

mod assemble;

pub use degrade_sched_qp as qp;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error:\n{}", .0.join("\n"))]
    Invalid(Vec<String>),
}

impl ScenarioError {
    pub fn violations(&self) -> &[String] {
        match self {
            ScenarioError::Parse(_) => &[],
            ScenarioError::Invalid(v) => v,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),

    #[error("solver error: {0}")]
    Qp(#[from] degrade_sched_qp::QpError),

    #[error("hard-infeasible window at t={t}: demand {demand} cannot be met{detail}")]
    HardInfeasible { t: usize, demand: f64, detail: String },

    #[error("agent sub-problem infeasible for unit {unit} in window starting at t={window_start}; the feasibility check should have rejected this schedule")]
    AgentInfeasible { unit: usize, window_start: usize },

    #[error("dual decomposition stalled at residual {residual:.6e} after {iterations} iterations (tolerance {tol:.6e})")]
    DualNonConvergence {
        residual: f64,
        iterations: usize,
        tol: f64,
    },

    #[error("size guard exceeded for {method}: {detail}")]
    SizeGuard { method: String, detail: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal error: {0}")]
    Internal(String),
}
