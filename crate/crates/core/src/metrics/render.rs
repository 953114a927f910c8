use image::{Rgb, RgbImage};

use super::{same_dims, MetricError, SPECTRUM};
use crate::codec::FlowMap;
use crate::grid::{AgentField, GoalField, Grid2D, UNREACHABLE};

const BLACK: Rgb<u8> = Rgb([0, 0, 0]);
const WHITE: Rgb<u8> = Rgb([255, 255, 255]);

pub fn palette_index(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 256.0).floor().min(255.0) as u8
}

pub fn spectrum(v: f64) -> [u8; 3] {
    SPECTRUM[palette_index(v) as usize]
}

/// `(y - yhat) / 2 + 0.5` per cell: 0.5 where the maps agree, toward 1 where
/// `y` has flow that `yhat` lacks, toward 0 for the reverse.
pub fn difference_codes(y: &FlowMap, yhat: &FlowMap) -> Result<Grid2D<f64>, MetricError> {
    same_dims(y, yhat)?;
    let values = y.grid.values().iter().zip(yhat.grid.values()).map(|(a, b)| (a - b) / 2.0 + 0.5).collect();
    Ok(Grid2D::from_vec(y.grid.rows(), y.grid.cols(), values).expect("dims checked"))
}

fn image_of(dims: (usize, usize), mut pixel: impl FnMut(crate::grid::Cell) -> Rgb<u8>) -> RgbImage {
    RgbImage::from_fn(dims.1 as u32, dims.0 as u32, |x, y| pixel(crate::grid::Cell::new(y as usize, x as usize)))
}

fn check_mask(m: &FlowMap, mask: &Grid2D<bool>) -> Result<(), MetricError> {
    if m.dims() == mask.dims() {
        Ok(())
    } else {
        Err(MetricError::DimensionMismatch { expected: m.dims(), actual: mask.dims() })
    }
}

/// Difference codes through the spectrum, obstacles black: agreement is
/// green, flow only in `y` red, flow only in `yhat` blue.
pub fn colored_difference(y: &FlowMap, yhat: &FlowMap, navigable: &Grid2D<bool>) -> Result<RgbImage, MetricError> {
    let codes = difference_codes(y, yhat)?;
    check_mask(y, navigable)?;
    Ok(image_of((codes.rows(), codes.cols()), |c| if navigable[c] { Rgb(spectrum(codes[c])) } else { BLACK }))
}

/// A flow map through the spectrum; cells outside `navigable` are black.
pub fn render_heatmap(m: &FlowMap, navigable: Option<&Grid2D<bool>>) -> Result<RgbImage, MetricError> {
    if let Some(mask) = navigable {
        check_mask(m, mask)?;
    }
    Ok(image_of((m.grid.rows(), m.grid.cols()), |c| match navigable {
        Some(mask) if !mask[c] => BLACK,
        _ => Rgb(spectrum(m.grid[c])),
    }))
}

/// Goal distance as a heatmap with goals red and the farthest cells blue;
/// unreachable cells black and agents, when given, white.
pub fn render_goal_field(goals: &GoalField, agents: Option<&AgentField>) -> RgbImage {
    let max = goals.max_finite().max(1) as f64;
    let d = &goals.distance;
    image_of((d.rows(), d.cols()), |c| {
        if agents.is_some_and(|a| a.grid[c] > 0.0) {
            WHITE
        } else if d[c] == UNREACHABLE {
            BLACK
        } else {
            Rgb(spectrum(1.0 - d[c] as f64 / max))
        }
    })
}

pub fn to_png(img: &RgbImage) -> Vec<u8> {
    let mut out = std::io::Cursor::new(Vec::new());
    img.write_to(&mut out, image::ImageFormat::Png).expect("in-memory PNG encoding");
    out.into_inner()
}

/// Binary PPM (P6).
pub fn to_ppm(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.as_raw());
    out
}
