use serde::{Deserialize, Serialize};

use super::plan::{CompressionPlan, Trim};
use super::{check_consistency, CodecError};
use crate::grid::{CellClass, Dims, Environment, Grid2D, Scenario, UNREACHABLE};

pub const CHANNELS: usize = 5;
pub const CHANNEL_NAMES: [&str; CHANNELS] = ["cx", "cy", "a", "g", "e"];

/// The five-channel fixed-size scenario encoding, in channel order
/// capacity-x, capacity-y, agents, goal distance, environment.
///
/// All grids are `side x side`; compressed content occupies the top-left
/// `content` block and the rest is obstacle padding.
#[derive(Clone, Debug, PartialEq)]
pub struct CageTensor {
    pub side: usize,
    pub content: Dims,
    pub original: Dims,
    pub trim: Trim,
    pub seed: u64,
    pub cx: Grid2D<u32>,
    pub cy: Grid2D<u32>,
    /// Agents per capacity, in `[0, 1]`.
    pub a: Grid2D<f64>,
    /// Minimum source path length over each compressed block.
    pub g: Grid2D<u32>,
    pub e: Grid2D<CellClass>,
}

impl CageTensor {
    /// Channel data as serialized: capacities as-is, agent density as-is,
    /// goal distance normalized by its largest finite value (unreachable and
    /// obstacle cells at 1), environment 1 for navigable and 0 for obstacle.
    pub fn to_f32(&self) -> Vec<f32> {
        let max_g = self.g.values().iter().copied().filter(|&d| d != UNREACHABLE).max().unwrap_or(0);
        let mut out = Vec::with_capacity(CHANNELS * self.side * self.side);
        out.extend(self.cx.values().iter().map(|&v| v as f32));
        out.extend(self.cy.values().iter().map(|&v| v as f32));
        out.extend(self.a.values().iter().map(|&v| v as f32));
        out.extend(self.g.values().iter().map(|&d| normalize_distance(d, max_g)));
        out.extend(self.e.values().iter().map(|&c| if c == CellClass::Navigable { 1.0 } else { 0.0 }));
        out
    }

    pub fn navigable_mask(&self) -> Grid2D<bool> {
        self.e.map(|c| *c == CellClass::Navigable)
    }
}

pub(crate) fn normalize_distance(d: u32, max_finite: u32) -> f32 {
    if d == UNREACHABLE {
        1.0
    } else if max_finite == 0 {
        0.0
    } else {
        (d as f64 / max_finite as f64) as f32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    Compressed,
    Original,
}

/// Long-term crowd density per cell, in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowMap {
    pub grid: Grid2D<f64>,
    pub resolution: Resolution,
}

impl FlowMap {
    pub fn zeros(dims: Dims, resolution: Resolution) -> Self {
        Self { grid: Grid2D::filled(dims.rows, dims.cols, 0.0).expect("non-empty dims"), resolution }
    }

    pub fn original(grid: Grid2D<f64>) -> Self {
        Self { grid, resolution: Resolution::Original }
    }

    pub fn dims(&self) -> Dims {
        self.grid.dims()
    }

    pub fn total(&self) -> f64 {
        self.grid.values().iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.grid.values().iter().copied().fold(0.0, f64::max)
    }
}

/// Encodes `s` with `plan`, padded to the plan's target side.
pub fn compress(s: &Scenario, plan: &CompressionPlan) -> Result<CageTensor, CodecError> {
    compress_padded(s, plan, plan.target_n)
}

/// Encodes `s` with `plan`, padded to `side x side`.
pub fn compress_padded(s: &Scenario, plan: &CompressionPlan, side: usize) -> Result<CageTensor, CodecError> {
    let violations = check_consistency(plan, &s.env);
    if !violations.is_empty() {
        return Err(CodecError::InconsistentPlan(violations));
    }
    if !plan.compressed.fits_within(side) {
        return Err(CodecError::DoesNotFit { compressed: plan.compressed, n: side });
    }

    let mut cx = Grid2D::filled(side, side, 1u32)?;
    let mut cy = Grid2D::filled(side, side, 1u32)?;
    let mut a = Grid2D::filled(side, side, 0.0)?;
    let mut g = Grid2D::filled(side, side, UNREACHABLE)?;
    let mut e = Grid2D::filled(side, side, CellClass::Obstacle)?;
    for r in &plan.regions {
        let capacity = r.capacity() as f64;
        for cell in r.compressed.cells() {
            let block = r.source_block(cell);
            let agents: f64 = block.cells().map(|c| s.agents.grid[c]).sum();
            cx[cell] = r.factor_x as u32;
            cy[cell] = r.factor_y as u32;
            a[cell] = agents / capacity;
            g[cell] = block.cells().map(|c| s.goals.distance[c]).min().unwrap_or(UNREACHABLE);
            e[cell] = CellClass::Navigable;
        }
    }
    Ok(CageTensor {
        side,
        content: plan.compressed,
        original: plan.original,
        trim: plan.trim,
        seed: s.seed,
        cx,
        cy,
        a,
        g,
        e,
    })
}

/// Raw channels of an uncompressed scenario padded to `side`, with no plan
/// involved.
pub fn extract_channels(s: &Scenario, side: usize) -> Result<CageTensor, CodecError> {
    let dims = s.dims();
    if !dims.fits_within(side) {
        return Err(CodecError::DoesNotFit { compressed: dims, n: side });
    }
    let pad = |cell: crate::grid::Cell| cell.row < dims.rows && cell.col < dims.cols;
    Ok(CageTensor {
        side,
        content: dims,
        original: dims,
        trim: Trim::default(),
        seed: s.seed,
        cx: Grid2D::filled(side, side, 1)?,
        cy: Grid2D::filled(side, side, 1)?,
        a: Grid2D::from_fn(side, side, |c| if pad(c) { s.agents.grid[c] } else { 0.0 })?,
        g: Grid2D::from_fn(side, side, |c| if pad(c) { s.goals.distance[c] } else { UNREACHABLE })?,
        e: Grid2D::from_fn(side, side, |c| if pad(c) { s.env.grid()[c] } else { CellClass::Obstacle })?,
    })
}

fn check_compressed_dims(flow: &FlowMap, plan: &CompressionPlan) -> Result<(), CodecError> {
    let d = flow.dims();
    let padded = d.rows == d.cols && d.rows == plan.target_n && plan.compressed.fits_within(d.rows);
    if d == plan.compressed || padded {
        Ok(())
    } else {
        Err(CodecError::DimensionMismatch { expected: plan.compressed, actual: d })
    }
}

/// Expands a compressed map of block masses to the source resolution: every
/// compressed cell's value is split evenly over the cells of its source
/// block, so the plain sum is conserved.
pub fn decompress(flow: &FlowMap, plan: &CompressionPlan) -> Result<FlowMap, CodecError> {
    check_compressed_dims(flow, plan)?;
    let mut out = FlowMap::zeros(plan.original, Resolution::Original);
    for r in &plan.regions {
        let capacity = r.capacity() as f64;
        for cell in r.compressed.cells() {
            let share = flow.grid[cell] / capacity;
            for c in r.source_block(cell).cells() {
                out.grid[c] = share;
            }
        }
    }
    Ok(out)
}

/// Block masses of a per-capacity density map (agent channel, flow targets,
/// predictions): each value times its cell's capacity.
pub fn density_to_mass(flow: &FlowMap, plan: &CompressionPlan) -> Result<FlowMap, CodecError> {
    check_compressed_dims(flow, plan)?;
    let mut out = flow.clone();
    for r in &plan.regions {
        let capacity = r.capacity() as f64;
        for cell in r.compressed.cells() {
            out.grid[cell] *= capacity;
        }
    }
    Ok(out)
}

/// Decompresses a per-capacity density map; agent and flow mass is
/// conserved and every source cell of a block receives the block density.
pub fn decompress_density(flow: &FlowMap, plan: &CompressionPlan) -> Result<FlowMap, CodecError> {
    decompress(&density_to_mass(flow, plan)?, plan)
}

/// The agent channel as a compressed density map.
pub fn agent_density(t: &CageTensor) -> FlowMap {
    FlowMap { grid: t.a.clone(), resolution: Resolution::Compressed }
}

/// Encodes a source-resolution flow map onto the compressed canvas the same
/// way agents are encoded: block mass divided by capacity. The result is
/// padded to `side`.
pub fn compress_flow(flow: &FlowMap, plan: &CompressionPlan, side: usize) -> Result<FlowMap, CodecError> {
    if flow.dims() != plan.original {
        return Err(CodecError::DimensionMismatch { expected: plan.original, actual: flow.dims() });
    }
    if !plan.compressed.fits_within(side) {
        return Err(CodecError::DoesNotFit { compressed: plan.compressed, n: side });
    }
    let mut out = FlowMap::zeros(Dims::new(side, side), Resolution::Compressed);
    for r in &plan.regions {
        let capacity = r.capacity() as f64;
        for cell in r.compressed.cells() {
            let mass: f64 = r.source_block(cell).cells().map(|c| flow.grid[c]).sum();
            out.grid[cell] = mass / capacity;
        }
    }
    Ok(out)
}

/// Source-resolution environment rebuilt from a plan: exactly the cells
/// covered by regions are navigable.
pub fn decompress_environment(plan: &CompressionPlan, cell_width: f64) -> Result<Environment, CodecError> {
    let mut grid = Grid2D::filled(plan.original.rows, plan.original.cols, CellClass::Obstacle)?;
    for r in &plan.regions {
        for c in r.source.cells() {
            grid[c] = CellClass::Navigable;
        }
    }
    Ok(Environment::new(grid, cell_width)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{plan_compression, segment_regions, visibility};
    use crate::grid::{Cell, Rect};

    fn scenario(rows: &[&str]) -> Scenario {
        Scenario::from_ascii(rows, 0.5, 3).unwrap()
    }

    fn planned(s: &Scenario, n: usize) -> CompressionPlan {
        plan_compression(&segment_regions(&visibility(&s.env), &s.env), &s.env, n)
    }

    #[test]
    fn identity_plan_matches_channel_extraction() {
        let s = scenario(&["G..#", ".A..", "#..A"]);
        let plan = planned(&s, 8);
        assert!(plan.is_identity());
        let t = compress(&s, &plan).unwrap();
        assert_eq!(t, extract_channels(&s, 8).unwrap());
        assert_eq!(t.to_f32(), extract_channels(&s, 8).unwrap().to_f32());
    }

    #[test]
    fn merged_pair_halves_agent_density_and_takes_min_goal_distance() {
        // Row 1, columns 2..8 form one 1x6 region; compress it along x by 2.
        let s = scenario(&["G.######", "...A...."]);
        let regions = segment_regions(&visibility(&s.env), &s.env);
        let mut plan = CompressionPlan::identity(&regions, &s.env, 8);
        let k = plan.source_owners()[Cell::new(1, 2)].unwrap();
        assert_eq!(plan.regions[k].source, Rect::new(1, 2, 1, 6));
        plan.regions[k].factor_x = 2;
        plan.regions[k].compressed.cols = 3;
        assert_eq!(check_consistency(&plan, &s.env), vec![]);

        let t = compress(&s, &plan).unwrap();
        let merged = Cell::new(1, 2);
        assert_eq!(t.cx[merged] * t.cy[merged], 2);
        // One agent among the two source cells.
        let agents: f64 = [Cell::new(1, 2), Cell::new(1, 3)].iter().map(|&c| s.agents.grid[c]).sum();
        assert_eq!(t.a[merged], agents / 2.0);
        assert_eq!(t.a[merged], 0.5);
        assert_eq!((s.goals.distance[Cell::new(1, 2)], s.goals.distance[Cell::new(1, 3)]), (3, 4));
        assert_eq!(t.g[merged], 3);
        assert_eq!(t.e[Cell::new(1, 5)], CellClass::Obstacle);
    }

    #[test]
    fn decompress_splits_uniformly_and_conserves_mass() {
        let s = scenario(&["G.......", "........", "...A....", "........"]);
        let plan = planned(&s, 2);
        assert_eq!(plan.compressed, Dims::new(1, 1));
        let mut flow = FlowMap::zeros(plan.compressed, Resolution::Compressed);
        flow.grid[Cell::new(0, 0)] = 0.8;
        let out = decompress(&flow, &plan).unwrap();
        assert!(out.grid.values().iter().all(|&v| (v - 0.8 / 32.0).abs() < 1e-15));
        assert!((out.total() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn decompress_rejects_wrong_dims() {
        let s = scenario(&["G.", ".."]);
        let plan = planned(&s, 4);
        let flow = FlowMap::zeros(Dims::new(3, 3), Resolution::Compressed);
        assert!(matches!(decompress(&flow, &plan), Err(CodecError::DimensionMismatch { .. })));
    }
}
