//! Compression of scenarios into fixed-size five-channel tensors and back.

mod consistency;
pub mod format;
mod plan;
mod tensor;
mod visibility;

use thiserror::Error;

use crate::grid::{Dims, GridError};

pub use consistency::{check_consistency, ConsistencyViolation};
pub use plan::{plan_compression, CompressionPlan, FitStatus, RegionPlan, Trim, PLAN_VERSION};
pub use tensor::{
    agent_density, compress, compress_flow, compress_padded, decompress, decompress_density, decompress_environment,
    density_to_mass, extract_channels, CageTensor, FlowMap, Resolution, CHANNELS, CHANNEL_NAMES,
};
pub use visibility::{region_owners, segment_regions, visibility, Region, Visibility, VisibilityGrid};

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("plan is inconsistent with the environment: {0:?}")]
    InconsistentPlan(Vec<ConsistencyViolation>),
    #[error("compressed dims {compressed} do not fit a {n}x{n} canvas")]
    DoesNotFit { compressed: Dims, n: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: Dims, actual: Dims },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("malformed tensor file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Plans and encodes a scenario in one step.
pub fn encode(s: &crate::grid::Scenario, n: usize) -> Result<(CompressionPlan, CageTensor), CodecError> {
    let plan = plan_compression(&segment_regions(&visibility(&s.env), &s.env), &s.env, n);
    let tensor = compress(s, &plan)?;
    Ok((plan, tensor))
}
