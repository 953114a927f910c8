//! Scores a few synthetic predictions against a proxy ground truth and
//! writes the evaluation CSV plus a colored difference image.
//!
//! cargo run --example evaluate_flow -- [out-dir]

use cageflow::codec::{compress_flow, FlowMap};
use cageflow::dataset::{generate_sample, DatasetGroup, RunConfig};
use cageflow::flow::Regime;
use cageflow::metrics::{colored_difference, kl_divergence, mae, to_png, write_reports_csv, EvalReport, GoalTag};

fn main() {
    let out = std::env::args().nth(1).map(std::path::PathBuf::from);
    let cfg = RunConfig { seed: 11, ..Default::default() };
    let sample = generate_sample(&cfg, DatasetGroup::DenseProxy, 3).expect("sample");
    let truth = &sample.y;
    let mask = sample.x.navigable_mask();

    let uniform = FlowMap { grid: mask.map(|&m| if m { 0.5 } else { 0.0 }), ..truth.clone() };
    let blurred = {
        let mut g = truth.grid.clone();
        for c in g.cells().collect::<Vec<_>>() {
            let around: Vec<f64> = truth.grid.neighbors4(c).map(|n| truth.grid[n]).collect();
            g[c] = if mask[c] { (truth.grid[c] + around.iter().sum::<f64>()) / (1 + around.len()) as f64 } else { 0.0 };
        }
        FlowMap { grid: g, ..truth.clone() }
    };
    // Source-resolution truth re-compressed; identical to the target.
    let recompressed = compress_flow(&sample.flow, &sample.plan, cfg.n).unwrap();

    let mut reports = Vec::new();
    for (id, prediction) in [("uniform", &uniform), ("blurred", &blurred), ("exact", &recompressed)] {
        reports.push(EvalReport {
            case_id: id.into(),
            regime: Regime::Dense,
            goal: GoalTag::GCentric,
            mae: mae(truth, prediction).unwrap(),
            kl: kl_divergence(prediction, truth).unwrap(),
        });
    }
    write_reports_csv(std::io::stdout(), &reports).unwrap();

    if let Some(dir) = out {
        std::fs::create_dir_all(&dir).unwrap();
        let img = colored_difference(truth, &blurred, &mask).unwrap();
        std::fs::write(dir.join("difference.png"), to_png(&img)).unwrap();
    }
}
