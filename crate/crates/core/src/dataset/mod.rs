//! Dataset emission: floorplan, crowd, encoding and ground-truth flow per
//! sample, written as tensor pairs with a checksummed manifest.

mod config;
mod emit;
mod verify;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{DatasetGroup, RunConfig, SCHEMA_VERSION};
pub use emit::{emit_dataset, emit_group, generate_sample, DatasetManifest, FileEntry, Sample, SampleRecord, THREADS_ENV};
pub use verify::{check_input_tensor, verify_dataset};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("invalid run config: {0}")]
    Config(String),
    #[error("sample {index} infeasible after {attempts} attempts: {last}")]
    Infeasible { index: usize, attempts: usize, last: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Codec(#[from] crate::codec::CodecError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

pub(crate) fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io { path: path.to_path_buf(), source }
}
