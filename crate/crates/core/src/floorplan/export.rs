use serde::{Deserialize, Serialize};

use super::{Floorplan, Morphology, Organization, Room};
use crate::grid::{Dims, Rect};

/// Labels and rectangles that accompany an exported floorplan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloorplanSidecar {
    pub morphology: Morphology,
    pub organization: Organization,
    pub dims: Dims,
    pub cell_width: f64,
    pub seed: u64,
    pub hallways: Vec<Rect>,
    pub rooms: Vec<Room>,
}

impl From<&Floorplan> for FloorplanSidecar {
    fn from(f: &Floorplan) -> Self {
        Self {
            morphology: f.config.morphology,
            organization: f.config.organization,
            dims: f.env.dims(),
            cell_width: f.env.cell_width(),
            seed: f.config.seed,
            hallways: f.hallway_rects.clone(),
            rooms: f.rooms.clone(),
        }
    }
}

/// Binary PGM: obstacles black, hallways light gray, rooms white, doors mid
/// gray.
pub fn to_pgm(f: &Floorplan) -> Vec<u8> {
    let d = f.env.dims();
    let mut out = format!("P5\n{} {}\n255\n", d.cols, d.rows).into_bytes();
    let doors: std::collections::HashSet<_> = f.rooms.iter().flat_map(|r| r.doors.iter().copied()).collect();
    for c in f.env.grid().cells() {
        out.push(if !f.env.is_navigable(c) {
            0
        } else if f.hallway[c] {
            200
        } else if doors.contains(&c) {
            128
        } else {
            255
        });
    }
    out
}
