//! Procedural floorplans: an exterior shape, a hallway organization, then
//! rectangular rooms with single-cell doors.

mod export;
mod exterior;
mod hallways;
mod rooms;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Cell, Environment, Grid2D, Rect, DEFAULT_CELL_WIDTH};

pub use export::{to_pgm, FloorplanSidecar};
pub use exterior::generate_exterior;
pub use hallways::{carve_hallways, Hallways, HALLWAY_WIDTH};
pub use rooms::populate_rooms;

pub const MIN_SIDE: usize = 6;
pub const MAX_SIDE: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Morphology {
    Point,
    Block,
    Line,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Organization {
    VerticalPoint,
    CorridorCenter,
    CorridorEdge,
    Compartments,
}

impl Morphology {
    pub const ALL: [Morphology; 3] = [Morphology::Point, Morphology::Block, Morphology::Line];
}

impl Organization {
    pub const ALL: [Organization; 4] = [
        Organization::VerticalPoint,
        Organization::CorridorCenter,
        Organization::CorridorEdge,
        Organization::Compartments,
    ];
}

/// The `i`-th of the twelve morphology/organization combinations, cycling.
pub fn typology(i: usize) -> (Morphology, Organization) {
    let k = i % 12;
    (Morphology::ALL[k / 4], Organization::ALL[k % 4])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoomSizes {
    pub min: usize,
    pub max: usize,
    /// Probability that a room reuses the size of the one placed before it.
    pub share: f64,
}

impl Default for RoomSizes {
    fn default() -> Self {
        Self { min: 3, max: 12, share: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloorplanConfig {
    pub morphology: Morphology,
    pub organization: Organization,
    pub rows: usize,
    pub cols: usize,
    pub rooms: RoomSizes,
    pub seed: u64,
}

impl FloorplanConfig {
    pub fn new(morphology: Morphology, organization: Organization, rows: usize, cols: usize, seed: u64) -> Self {
        Self { morphology, organization, rows, cols, rooms: RoomSizes::default(), seed }
    }

    pub fn validate(&self) -> Result<(), FloorplanError> {
        let side_ok = |s: usize| (MIN_SIDE..=MAX_SIDE).contains(&s);
        if !side_ok(self.rows) || !side_ok(self.cols) {
            return Err(FloorplanError::DimsOutOfRange { rows: self.rows, cols: self.cols });
        }
        let r = &self.rooms;
        if r.min == 0 || r.min > r.max || !(0.0..=1.0).contains(&r.share) {
            return Err(FloorplanError::BadRoomSizes);
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FloorplanError {
    #[error("{morphology:?} cannot be built in {rows}x{cols}")]
    DimsTooSmall { morphology: Morphology, rows: usize, cols: usize },
    #[error("dims {rows}x{cols} outside [{MIN_SIDE}, {MAX_SIDE}]")]
    DimsOutOfRange { rows: usize, cols: usize },
    #[error("room size range is empty or share probability is not in [0, 1]")]
    BadRoomSizes,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Room {
    pub id: u32,
    /// Tile including its walls.
    pub tile: Rect,
    pub interior: Rect,
    pub doors: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Floorplan {
    pub config: FloorplanConfig,
    pub env: Environment,
    pub hallway: Grid2D<bool>,
    pub hallway_rects: Vec<Rect>,
    /// Room owning each interior and door cell.
    pub room_ids: Grid2D<Option<u32>>,
    pub rooms: Vec<Room>,
}

/// Runs all three stages.
pub fn generate(cfg: &FloorplanConfig) -> Result<Floorplan, FloorplanError> {
    let mask = generate_exterior(cfg)?;
    let hallways = carve_hallways(&mask, cfg);
    Ok(populate_rooms(&mask, &hallways, cfg))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FloorplanViolation {
    HallwayNotNavigable(Cell),
    Disconnected { components: usize },
    RoomWithoutDoor(u32),
    RoomCellNotNavigable(Cell),
}

/// Checks the structural guarantees every generated floorplan carries.
pub fn check_floorplan(f: &Floorplan) -> Vec<FloorplanViolation> {
    let mut out = Vec::new();
    for (c, &h) in f.hallway.iter() {
        if h && !f.env.is_navigable(c) {
            out.push(FloorplanViolation::HallwayNotNavigable(c));
        }
    }
    for (c, id) in f.room_ids.iter() {
        if id.is_some() && !f.env.is_navigable(c) {
            out.push(FloorplanViolation::RoomCellNotNavigable(c));
        }
    }
    for room in &f.rooms {
        if room.doors.is_empty() {
            out.push(FloorplanViolation::RoomWithoutDoor(room.id));
        }
    }
    let components = crate::grid::components(&f.env.navigable_mask());
    if components != 1 {
        out.push(FloorplanViolation::Disconnected { components });
    }
    out
}

pub(crate) fn default_cell_width() -> f64 {
    DEFAULT_CELL_WIDTH
}
