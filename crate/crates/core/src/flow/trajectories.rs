use std::io::Write;

use serde::{Deserialize, Serialize};

use super::proxy::normalize;
use crate::codec::FlowMap;
use crate::grid::{Cell, Environment};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentTrack {
    pub id: usize,
    /// Position in meters (x along columns, y along rows) for frames
    /// `0..positions.len()`.
    pub positions: Vec<(f64, f64)>,
    pub finished: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectories {
    pub cell_width: f64,
    pub frames: usize,
    pub agents: Vec<AgentTrack>,
}

impl Trajectories {
    pub fn cell_at(&self, (x, y): (f64, f64)) -> Option<Cell> {
        (x >= 0.0 && y >= 0.0).then(|| Cell::new((y / self.cell_width) as usize, (x / self.cell_width) as usize))
    }

    /// One JSON object per agent per frame: `{"frame", "agent", "x", "y"}`.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for frame in 0..self.frames {
            for a in &self.agents {
                if let Some(&(x, y)) = a.positions.get(frame) {
                    writeln!(w, "{}", serde_json::json!({ "frame": frame, "agent": a.id, "x": x, "y": y }))?;
                }
            }
        }
        Ok(())
    }
}

/// Mean occupancy per cell over all frames, max-normalized.
pub fn accumulate_flow(t: &Trajectories, env: &Environment) -> FlowMap {
    let dims = env.dims();
    let mut counts = env.grid().map(|_| 0.0);
    if t.frames == 0 {
        return normalize(&counts);
    }
    for a in &t.agents {
        for &p in &a.positions {
            if let Some(c) = t.cell_at(p).filter(|c| c.row < dims.rows && c.col < dims.cols) {
                counts[c] += 1.0;
            }
        }
    }
    let frames = t.frames as f64;
    normalize(&counts.map(|&v| v / frames))
}
