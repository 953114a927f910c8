use rand::Rng;

use super::exterior::{block_hole, line_body};
use super::{FloorplanConfig, Morphology, Organization};
use crate::grid::{Grid2D, Rect};

pub const HALLWAY_WIDTH: usize = 2;
const W: usize = HALLWAY_WIDTH;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hallways {
    pub mask: Grid2D<bool>,
    /// Rectangles whose union is the mask; they may overlap.
    pub rects: Vec<Rect>,
}

/// Bounding box of the true cells.
fn bbox(mask: &Grid2D<bool>) -> Rect {
    let cells: Vec<_> = mask.iter().filter(|(_, &v)| v).map(|(c, _)| c).collect();
    let r0 = cells.iter().map(|c| c.row).min().unwrap_or(0);
    let c0 = cells.iter().map(|c| c.col).min().unwrap_or(0);
    let r1 = cells.iter().map(|c| c.row + 1).max().unwrap_or(0);
    let c1 = cells.iter().map(|c| c.col + 1).max().unwrap_or(0);
    Rect::new(r0, c0, r1 - r0, c1 - c0)
}

fn core_side(b: &Rect) -> usize {
    (b.rows.min(b.cols) / 4).clamp(W, 6).min(b.rows.min(b.cols))
}

/// A band of width `W` through the middle of `b` along its longer side.
fn center_corridor(b: &Rect) -> Rect {
    if b.cols >= b.rows {
        Rect::new(b.row + (b.rows - W) / 2, b.col, W, b.cols)
    } else {
        Rect::new(b.row, b.col + (b.cols - W) / 2, b.rows, W)
    }
}

fn edge_corridor(b: &Rect, side: usize) -> Rect {
    match side {
        0 => Rect::new(b.row, b.col, W, b.cols),
        1 => Rect::new(b.bottom() - W, b.col, W, b.cols),
        2 => Rect::new(b.row, b.col, b.rows, W),
        _ => Rect::new(b.row, b.right() - W, b.rows, W),
    }
}

/// Hallway ring hugging the courtyard of a block floorplan.
fn ring(hole: &Rect) -> [Rect; 4] {
    let outer = Rect::new(hole.row - W, hole.col - W, hole.rows + 2 * W, hole.cols + 2 * W);
    [
        Rect::new(outer.row, outer.col, W, outer.cols),
        Rect::new(hole.bottom(), outer.col, W, outer.cols),
        Rect::new(hole.row, outer.col, hole.rows, W),
        Rect::new(hole.row, hole.right(), hole.rows, W),
    ]
}

/// Stage two: hallway cells for the configured organization.
pub fn carve_hallways(mask: &Grid2D<bool>, cfg: &FloorplanConfig) -> Hallways {
    let mut rng = crate::seed::rng(crate::seed::derive_seed(cfg.seed, 1));
    let (rows, cols) = (mask.rows(), mask.cols());
    let b = match cfg.morphology {
        Morphology::Line => line_body(rows, cols),
        _ => bbox(mask),
    };
    let hole = (cfg.morphology == Morphology::Block).then(|| block_hole(rows, cols));

    let rects: Vec<Rect> = match (cfg.organization, hole) {
        (Organization::VerticalPoint, _) => {
            let s = core_side(&b);
            let s = hole.map_or(s, |h| s.min(h.row));
            let at_edge = hole.is_some() || rng.gen_bool(0.5);
            let row = if at_edge { b.row } else { b.row + (b.rows - s) / 2 };
            vec![Rect::new(row, b.col + (b.cols - s) / 2, s, s)]
        }
        (Organization::CorridorCenter, None) => vec![center_corridor(&b)],
        (Organization::CorridorCenter, Some(h)) => ring(&h).to_vec(),
        (Organization::CorridorEdge, _) => {
            let side = match cfg.morphology {
                Morphology::Line if b.cols >= b.rows => rng.gen_range(0..2),
                Morphology::Line => rng.gen_range(2..4),
                _ => rng.gen_range(0..4),
            };
            vec![edge_corridor(&b, side)]
        }
        (Organization::Compartments, None) => {
            let spine = center_corridor(&b);
            let mut out = vec![spine];
            let horizontal = b.cols >= b.rows;
            let long = if horizontal { b.cols } else { b.rows };
            let spacing = rng.gen_range(8..=14);
            let mut at = spacing;
            while at + W + 3 <= long {
                out.push(if horizontal {
                    Rect::new(b.row, b.col + at, b.rows, W)
                } else {
                    Rect::new(b.row + at, b.col, W, b.cols)
                });
                at += spacing;
            }
            out
        }
        (Organization::Compartments, Some(h)) => {
            let mut out = ring(&h).to_vec();
            let (mid_r, mid_c) = (h.row + (h.rows.saturating_sub(W)) / 2, h.col + (h.cols.saturating_sub(W)) / 2);
            let (wr, wc) = (W.min(h.rows), W.min(h.cols));
            out.push(Rect::new(0, mid_c, h.row - W, wc));
            out.push(Rect::new(h.bottom() + W, mid_c, rows - h.bottom() - W, wc));
            out.push(Rect::new(mid_r, 0, wr, h.col - W));
            out.push(Rect::new(mid_r, h.right() + W, wr, cols - h.right() - W));
            out
        }
    };

    let mut hall = mask.map(|_| false);
    for r in &rects {
        for c in r.cells() {
            if mask.in_bounds(c) && mask[c] {
                hall[c] = true;
            }
        }
    }
    Hallways { mask: hall, rects }
}
