use super::{FloorplanConfig, FloorplanError, Morphology};
use crate::grid::{Grid2D, Rect};

/// Margin a block's courtyard must keep from the outer edge.
const BLOCK_MARGIN: usize = 3;
const LINE_ASPECT: usize = 3;
const LINE_MIN_WIDTH: usize = 4;

/// The courtyard of a block floorplan: a third of each side, centered.
pub(crate) fn block_hole(rows: usize, cols: usize) -> Rect {
    let (h, w) = (rows / 3, cols / 3);
    Rect::new((rows - h) / 2, (cols - w) / 2, h, w)
}

/// In-shape rectangle of a line floorplan: the full long side and at most a
/// third of it across, anchored top-left.
pub(crate) fn line_body(rows: usize, cols: usize) -> Rect {
    if cols >= rows {
        Rect::new(0, 0, rows.min(cols / LINE_ASPECT), cols)
    } else {
        Rect::new(0, 0, rows, cols.min(rows / LINE_ASPECT))
    }
}

/// Stage one: the in-shape mask of the floorplan.
pub fn generate_exterior(cfg: &FloorplanConfig) -> Result<Grid2D<bool>, FloorplanError> {
    cfg.validate()?;
    let (rows, cols) = (cfg.rows, cfg.cols);
    let too_small = FloorplanError::DimsTooSmall { morphology: cfg.morphology, rows, cols };
    let mask = match cfg.morphology {
        Morphology::Point => Grid2D::filled(rows, cols, true),
        Morphology::Block => {
            let hole = block_hole(rows, cols);
            let margins = [hole.row, hole.col, rows - hole.bottom(), cols - hole.right()];
            if hole.area() == 0 || margins.iter().any(|&m| m < BLOCK_MARGIN) {
                return Err(too_small);
            }
            Grid2D::from_fn(rows, cols, |c| !hole.contains(c))
        }
        Morphology::Line => {
            let body = line_body(rows, cols);
            if body.rows.min(body.cols) < LINE_MIN_WIDTH {
                return Err(too_small);
            }
            Grid2D::from_fn(rows, cols, |c| body.contains(c))
        }
    };
    Ok(mask.expect("validated dims are non-empty"))
}
