//! Crowd-flow scenario encoding, synthetic floorplans and flows, and
//! evaluation metrics.

pub mod cli;
pub mod codec;
pub mod dataset;
pub mod floorplan;
pub mod flow;
pub mod grid;
pub mod metrics;
pub mod seed;
