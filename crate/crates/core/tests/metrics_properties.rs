use cageflow::codec::{FlowMap, Resolution};
use cageflow::grid::Grid2D;
use cageflow::metrics::{difference_codes, kl_divergence, mae, masked_kl, masked_mae, palette_index, MetricError};
use proptest::prelude::*;

fn map(rows: usize, cols: usize, v: Vec<f64>) -> FlowMap {
    FlowMap { grid: Grid2D::from_vec(rows, cols, v).unwrap(), resolution: Resolution::Compressed }
}

fn maps(count: usize) -> impl Strategy<Value = Vec<FlowMap>> {
    (1usize..8, 1usize..8).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(0.0f64..1.0, r * c), count)
            .prop_map(move |vs| vs.into_iter().map(|v| map(r, c, v)).collect())
    })
}

proptest! {
    #[test]
    fn mae_is_a_metric(m in maps(3)) {
        let (a, b, c) = (&m[0], &m[1], &m[2]);
        prop_assert_eq!(mae(a, a).unwrap(), 0.0);
        prop_assert_eq!(mae(a, b).unwrap(), mae(b, a).unwrap());
        prop_assert!(mae(a, b).unwrap() >= 0.0);
        prop_assert!(mae(a, c).unwrap() <= mae(a, b).unwrap() + mae(b, c).unwrap() + 1e-12);
    }

    #[test]
    fn kl_is_nonnegative_and_zero_on_identity(m in maps(2)) {
        let (p, q) = (&m[0], &m[1]);
        prop_assume!(p.total() > 0.0 && q.total() > 0.0);
        prop_assert_eq!(kl_divergence(p, p).unwrap(), 0.0);
        prop_assert!(kl_divergence(q, p).unwrap() >= 0.0);
    }

    #[test]
    fn kl_ignores_scale(m in maps(2), s in 0.01f64..100.0) {
        let (p, q) = (&m[0], &m[1]);
        prop_assume!(p.total() > 0.0 && q.total() > 0.0);
        let scaled = FlowMap { grid: q.grid.map(|v| v * s), ..q.clone() };
        prop_assert!((kl_divergence(q, p).unwrap() - kl_divergence(&scaled, p).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn point_truth_against_uniform_is_ln_k(k in 1usize..200, at in 0usize..200) {
        let mut point = vec![0.0; k];
        point[at % k] = 0.3;
        let d = kl_divergence(&map(1, k, vec![0.7; k]), &map(1, k, point)).unwrap();
        prop_assert!((d - (k as f64).ln()).abs() < 1e-9);
    }

    #[test]
    fn difference_codes_mirror(m in maps(2)) {
        let (y, yhat) = (&m[0], &m[1]);
        let a = difference_codes(y, yhat).unwrap();
        let b = difference_codes(yhat, y).unwrap();
        for (x, z) in a.values().iter().zip(b.values()) {
            prop_assert!((0.0..=1.0).contains(x));
            prop_assert!((x + z - 1.0).abs() < 1e-12);
        }
        prop_assert!(difference_codes(y, y).unwrap().values().iter().all(|&c| c == 0.5));
    }

    #[test]
    fn masked_metrics_with_full_mask_match(m in maps(2)) {
        let (y, yhat) = (&m[0], &m[1]);
        let all = y.grid.map(|_| true);
        prop_assert!((masked_mae(y, yhat, &all).unwrap() - mae(y, yhat).unwrap()).abs() < 1e-12);
        if y.total() > 0.0 && yhat.total() > 0.0 {
            prop_assert_eq!(masked_kl(yhat, y, &all).unwrap(), kl_divergence(yhat, y).unwrap());
        }
    }

    #[test]
    fn palette_is_monotone(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(palette_index(lo) <= palette_index(hi));
    }
}

#[test]
fn kl_floors_missing_support() {
    let truth = map(1, 4, vec![0.5, 0.5, 0.0, 0.0]);
    let prediction = map(1, 4, vec![1.0, 0.0, 0.0, 0.0]);
    let d = kl_divergence(&prediction, &truth).unwrap();
    assert!(d.is_finite() && d > 5.0, "{d}");
}

#[test]
fn all_zero_maps_are_rejected() {
    let zero = map(2, 2, vec![0.0; 4]);
    let one = map(2, 2, vec![1.0; 4]);
    assert_eq!(kl_divergence(&zero, &one), Err(MetricError::AllZeroMap));
    assert_eq!(kl_divergence(&one, &zero), Err(MetricError::AllZeroMap));
    assert!(matches!(mae(&one, &map(1, 4, vec![0.0; 4])), Err(MetricError::DimensionMismatch { .. })));
}
