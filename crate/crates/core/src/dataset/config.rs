use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{io_err, DatasetError};
use crate::floorplan::{MAX_SIDE, MIN_SIDE};
use crate::flow::{Regime, SocialForceParams, DENSE_MIN_DENSITY, SPARSE_MAX_AGENTS};

pub const SCHEMA_VERSION: u32 = 1;

/// Crowd size and flow source; the four combinations form the four groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetGroup {
    SparseProxy,
    DenseProxy,
    SparseSimulated,
    DenseSimulated,
}

impl DatasetGroup {
    pub const ALL: [DatasetGroup; 4] =
        [DatasetGroup::SparseProxy, DatasetGroup::DenseProxy, DatasetGroup::SparseSimulated, DatasetGroup::DenseSimulated];

    pub fn regime(self) -> Regime {
        match self {
            DatasetGroup::SparseProxy | DatasetGroup::SparseSimulated => Regime::Sparse,
            DatasetGroup::DenseProxy | DatasetGroup::DenseSimulated => Regime::Dense,
        }
    }

    pub fn simulated(self) -> bool {
        matches!(self, DatasetGroup::SparseSimulated | DatasetGroup::DenseSimulated)
    }

    pub fn name(self) -> &'static str {
        match self {
            DatasetGroup::SparseProxy => "sparse-proxy",
            DatasetGroup::DenseProxy => "dense-proxy",
            DatasetGroup::SparseSimulated => "sparse-simulated",
            DatasetGroup::DenseSimulated => "dense-simulated",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == name)
    }
}

/// Everything that determines a dataset run. Stored as one JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    /// Canvas side of the encoded tensors.
    pub n: usize,
    pub out: PathBuf,
    pub groups: Vec<DatasetGroup>,
    /// Samples per group.
    pub count: usize,
    pub seed: u64,
    /// Floorplan side lengths are drawn uniformly from this range; defaults
    /// to `[n/2, 3n/2]`.
    pub side_range: Option<(usize, usize)>,
    pub sparse_agents: (usize, usize),
    /// Dense crowd density range, agents per square meter.
    pub dense_density: (f64, f64),
    pub social_force: SocialForceParams,
    pub png: bool,
    /// Worker cap; falls back to the environment, then to all cores.
    pub threads: Option<usize>,
    pub max_attempts: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n: 32,
            out: PathBuf::from("dataset"),
            groups: vec![DatasetGroup::SparseProxy],
            count: 12,
            seed: 0,
            side_range: None,
            sparse_agents: (1, SPARSE_MAX_AGENTS),
            dense_density: (0.05, 0.2),
            social_force: SocialForceParams::default(),
            png: true,
            threads: None,
            max_attempts: 64,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, DatasetError> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let cfg: RunConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn sides(&self) -> (usize, usize) {
        self.side_range.unwrap_or(((self.n / 2).max(MIN_SIDE), 3 * self.n / 2))
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        let fail = |m: String| Err(DatasetError::Config(m));
        if self.schema_version != SCHEMA_VERSION {
            return fail(format!("schema_version {} (expected {SCHEMA_VERSION})", self.schema_version));
        }
        if self.n < 8 {
            return fail(format!("n must be at least 8, got {}", self.n));
        }
        if self.count < 1 {
            return fail("count must be at least 1".into());
        }
        if self.groups.is_empty() {
            return fail("no dataset group selected".into());
        }
        let (lo, hi) = self.sides();
        if lo < MIN_SIDE || lo > hi || hi > MAX_SIDE {
            return fail(format!("side range [{lo}, {hi}] outside [{MIN_SIDE}, {MAX_SIDE}]"));
        }
        let (a, b) = self.sparse_agents;
        if a > b || b > SPARSE_MAX_AGENTS {
            return fail(format!("sparse agent range [{a}, {b}] must lie within [0, {SPARSE_MAX_AGENTS}]"));
        }
        let (a, b) = self.dense_density;
        if !(a.is_finite() && b.is_finite()) || a < DENSE_MIN_DENSITY || a > b {
            return fail(format!("dense density range [{a}, {b}] must start at {DENSE_MIN_DENSITY} or above"));
        }
        if self.max_attempts == 0 {
            return fail("max_attempts must be at least 1".into());
        }
        self.social_force.validate().map_err(|e| DatasetError::Config(e.to_string()))
    }
}
