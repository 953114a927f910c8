//! Sparse and dense proxy flows on the same floorplan, printed as ASCII
//! shades and written as PNG heatmaps.
//!
//! cargo run --example proxy_flow -- [seed] [out-dir]

use cageflow::codec::FlowMap;
use cageflow::floorplan::{generate, FloorplanConfig, Morphology, Organization};
use cageflow::flow::{proxy_dense_flow, proxy_sparse_flow, sample_agents_goals, CrowdConfig};
use cageflow::grid::Cell;
use cageflow::metrics::{render_heatmap, to_png};

const SHADES: &[u8] = b" .:-=+*#%@";

fn show(flow: &FlowMap, navigable: &cageflow::grid::Grid2D<bool>) {
    for r in 0..flow.grid.rows() {
        let line: String = (0..flow.grid.cols())
            .map(|c| {
                let cell = Cell::new(r, c);
                if !navigable[cell] {
                    '\u{2588}'
                } else {
                    SHADES[((flow.grid[cell] * (SHADES.len() - 1) as f64).round() as usize).min(SHADES.len() - 1)] as char
                }
            })
            .collect();
        println!("{line}");
    }
}

fn main() {
    let seed: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    let out = std::env::args().nth(2).map(std::path::PathBuf::from);
    let f = generate(&FloorplanConfig::new(Morphology::Point, Organization::Compartments, 28, 40, seed)).expect("floorplan");
    let mask = f.env.navigable_mask();

    for (name, crowd) in [("sparse", CrowdConfig::sparse(12, seed)), ("dense", CrowdConfig::dense(0.15, seed))] {
        let s = sample_agents_goals(&f.env, &crowd).expect("room for the crowd");
        let flow = if name == "sparse" { proxy_sparse_flow(&s) } else { proxy_dense_flow(&s) }.expect("reachable goals");
        println!("{name}: {} agents, {} goal cells", s.agent_count(), s.goals.goal_cells().count());
        show(&flow, &mask);
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir).unwrap();
            std::fs::write(dir.join(format!("{name}.png")), to_png(&render_heatmap(&flow, Some(&mask)).unwrap())).unwrap();
        }
    }
}
