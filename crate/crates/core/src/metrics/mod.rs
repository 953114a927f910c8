//! Flow-map error metrics, difference images and heatmaps.

mod palette;
mod render;
mod report;

use thiserror::Error;

use crate::codec::FlowMap;
use crate::grid::{Dims, Grid2D};

pub use palette::SPECTRUM;
pub use render::{
    colored_difference, difference_codes, palette_index, render_goal_field, render_heatmap, spectrum, to_png, to_ppm,
};
pub use report::{read_reports_csv, write_reports_csv, EvalReport, GoalTag};

/// Floor added to predicted probabilities where the truth has mass.
pub const KL_EPSILON: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: Dims, actual: Dims },
    #[error("map has no mass")]
    AllZeroMap,
}

fn same_dims(a: &FlowMap, b: &FlowMap) -> Result<(), MetricError> {
    if a.dims() == b.dims() {
        Ok(())
    } else {
        Err(MetricError::DimensionMismatch { expected: a.dims(), actual: b.dims() })
    }
}

/// Mean absolute difference over every cell.
pub fn mae(y: &FlowMap, yhat: &FlowMap) -> Result<f64, MetricError> {
    same_dims(y, yhat)?;
    let n = y.grid.len() as f64;
    Ok(y.grid.values().iter().zip(yhat.grid.values()).map(|(a, b)| (a - b).abs()).sum::<f64>() / n)
}

/// Mean absolute difference over the cells where `mask` holds.
pub fn masked_mae(y: &FlowMap, yhat: &FlowMap, mask: &Grid2D<bool>) -> Result<f64, MetricError> {
    same_dims(y, yhat)?;
    if mask.dims() != y.dims() {
        return Err(MetricError::DimensionMismatch { expected: y.dims(), actual: mask.dims() });
    }
    let (mut sum, mut n) = (0.0, 0usize);
    for ((a, b), &m) in y.grid.values().iter().zip(yhat.grid.values()).zip(mask.values()) {
        if m {
            sum += (a - b).abs();
            n += 1;
        }
    }
    Ok(if n == 0 { 0.0 } else { sum / n as f64 })
}

/// `D_KL(truth || prediction)` in nats with both maps normalized to unit
/// mass. Predicted probabilities are floored at [`KL_EPSILON`] (and
/// renormalized) only on the truth's support, so identical maps score
/// exactly 0 and a point truth against a uniform prediction over `k` cells
/// scores exactly `ln k`.
pub fn kl_divergence(prediction: &FlowMap, truth: &FlowMap) -> Result<f64, MetricError> {
    same_dims(prediction, truth)?;
    let total = |m: &FlowMap| m.grid.values().iter().map(|v| v.max(0.0)).sum::<f64>();
    let (tp, tq) = (total(truth), total(prediction));
    if tp <= 0.0 || tq <= 0.0 {
        return Err(MetricError::AllZeroMap);
    }
    let floored: Vec<f64> = truth
        .grid
        .values()
        .iter()
        .zip(prediction.grid.values())
        .map(|(&p, &q)| {
            let q = q.max(0.0) / tq;
            if p > 0.0 {
                q.max(KL_EPSILON)
            } else {
                q
            }
        })
        .collect();
    let lifted = truth.grid.values().iter().zip(prediction.grid.values()).any(|(&p, &q)| p > 0.0 && q.max(0.0) / tq < KL_EPSILON);
    let norm: f64 = if lifted { floored.iter().sum() } else { 1.0 };
    let mut d = 0.0;
    for (&p, &q) in truth.grid.values().iter().zip(&floored) {
        if p > 0.0 {
            let p = p / tp;
            d += p * (p / (q / norm)).ln();
        }
    }
    Ok(d.max(0.0))
}

/// [`kl_divergence`] after zeroing cells outside `mask`.
pub fn masked_kl(prediction: &FlowMap, truth: &FlowMap, mask: &Grid2D<bool>) -> Result<f64, MetricError> {
    if mask.dims() != truth.dims() {
        return Err(MetricError::DimensionMismatch { expected: truth.dims(), actual: mask.dims() });
    }
    let apply = |m: &FlowMap| {
        let mut out = m.clone();
        for (v, &k) in out.grid.values_mut().iter_mut().zip(mask.values()) {
            if !k {
                *v = 0.0;
            }
        }
        out
    };
    kl_divergence(&apply(prediction), &apply(truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::Resolution;

    fn map(rows: usize, cols: usize, v: &[f64]) -> FlowMap {
        FlowMap { grid: Grid2D::from_vec(rows, cols, v.to_vec()).unwrap(), resolution: Resolution::Original }
    }

    #[test]
    fn mae_closed_forms() {
        let a = map(2, 2, &[0.0; 4]);
        let b = map(2, 2, &[1.0; 4]);
        assert_eq!(mae(&a, &a).unwrap(), 0.0);
        assert_eq!(mae(&a, &b).unwrap(), 1.0);
        assert!(matches!(mae(&a, &map(1, 4, &[0.0; 4])), Err(MetricError::DimensionMismatch { .. })));
    }

    #[test]
    fn masked_mae_ignores_obstacles() {
        let a = map(1, 3, &[0.2, 0.9, 0.0]);
        let b = map(1, 3, &[0.4, 0.0, 0.0]);
        let mask = Grid2D::from_vec(1, 3, vec![true, false, true]).unwrap();
        assert!((masked_mae(&a, &b, &mask).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn kl_closed_forms() {
        let p = map(2, 3, &[0.3, 0.1, 0.0, 0.0, 0.5, 0.1]);
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        let point = map(2, 3, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let uniform = map(2, 3, &[0.0, 0.25, 0.25, 0.25, 0.25, 0.0]);
        assert!((kl_divergence(&uniform, &point).unwrap() - 4f64.ln()).abs() < 1e-12);
        assert_eq!(kl_divergence(&point, &map(2, 3, &[0.0; 6])), Err(MetricError::AllZeroMap));
    }

    #[test]
    fn kl_is_finite_when_prediction_misses_support() {
        let truth = map(1, 2, &[1.0, 0.0]);
        let pred = map(1, 2, &[0.0, 1.0]);
        let d = kl_divergence(&pred, &truth).unwrap();
        assert!(d.is_finite() && d > 20.0);
    }
}
