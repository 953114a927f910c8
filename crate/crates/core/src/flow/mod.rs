//! Ground-truth crowd flow: static proxy flows and a social-force simulator.

mod proxy;
mod sample;
mod social_force;
mod trajectories;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Environment, GridError};

pub use proxy::{cohesive_groups, proxy_dense_counts, proxy_dense_flow, proxy_sparse_counts, proxy_sparse_flow, CONGESTION_WEIGHT};
pub use sample::sample_agents_goals;
pub use social_force::{simulate_social_force, SocialForceParams};
pub use trajectories::{accumulate_flow, AgentTrack, Trajectories};

/// Largest sparse crowd.
pub const SPARSE_MAX_AGENTS: usize = 25;
/// Smallest dense crowd density, agents per square meter.
pub const DENSE_MIN_DENSITY: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    Sparse,
    Dense,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrowdSize {
    Count(usize),
    /// Agents per square meter of navigable floor.
    Density(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrowdConfig {
    pub regime: Regime,
    pub size: CrowdSize,
    pub seed: u64,
}

impl CrowdConfig {
    pub fn sparse(count: usize, seed: u64) -> Self {
        Self { regime: Regime::Sparse, size: CrowdSize::Count(count), seed }
    }

    pub fn dense(density: f64, seed: u64) -> Self {
        Self { regime: Regime::Dense, size: CrowdSize::Density(density), seed }
    }

    /// Agent count for `env`, checked against the regime bounds.
    pub fn agent_count(&self, env: &Environment) -> Result<usize, FlowError> {
        let area = env.navigable_area();
        let count = match self.size {
            CrowdSize::Count(k) => k,
            CrowdSize::Density(d) if d.is_finite() && d >= 0.0 => (d * area).ceil() as usize,
            CrowdSize::Density(d) => return Err(FlowError::RegimeMismatch(format!("density {d} is not a valid density"))),
        };
        match self.regime {
            Regime::Sparse if count > SPARSE_MAX_AGENTS => {
                Err(FlowError::RegimeMismatch(format!("{count} agents exceed the sparse limit of {SPARSE_MAX_AGENTS}")))
            }
            Regime::Dense if (count as f64) < DENSE_MIN_DENSITY * area => Err(FlowError::RegimeMismatch(format!(
                "{count} agents on {area} m2 is below the dense minimum of {DENSE_MIN_DENSITY} per m2"
            ))),
            _ => Ok(count),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("no feasible placement: {0}")]
    Infeasible(String),
    #[error("crowd does not match its regime: {0}")]
    RegimeMismatch(String),
    #[error("social force parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}
