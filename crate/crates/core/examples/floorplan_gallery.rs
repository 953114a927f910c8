//! Prints one floorplan per typology as text, with its region count and
//! the compressed size it reaches on a 32x32 canvas.
//!
//! cargo run --example floorplan_gallery -- [rows] [cols] [seed]

use cageflow::codec::{plan_compression, segment_regions, visibility};
use cageflow::floorplan::{generate, typology, FloorplanConfig};

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let rows = args.first().copied().unwrap_or(24);
    let cols = args.get(1).copied().unwrap_or(48);
    let seed = args.get(2).copied().unwrap_or(1) as u64;

    for i in 0..12 {
        let (m, o) = typology(i);
        let f = match generate(&FloorplanConfig::new(m, o, rows, cols, seed)) {
            Ok(f) => f,
            Err(e) => {
                println!("{m:?}/{o:?}: {e}\n");
                continue;
            }
        };
        let regions = segment_regions(&visibility(&f.env), &f.env);
        let plan = plan_compression(&regions, &f.env, 32);
        println!(
            "{m:?}/{o:?}: {} rooms, {} regions, compressed {} ({:?})",
            f.rooms.len(),
            regions.len(),
            plan.compressed,
            plan.status
        );
        for r in 0..rows {
            let line: String = (0..cols)
                .map(|c| {
                    let cell = cageflow::grid::Cell::new(r, c);
                    match (f.env.is_navigable(cell), f.hallway[cell]) {
                        (false, _) => '#',
                        (true, true) => ':',
                        (true, false) => '.',
                    }
                })
                .collect();
            println!("{line}");
        }
        println!();
    }
}
