//! Goal distance field and greedy descent on a small hand-drawn map.
//!
//! cargo run --example distance_field

use cageflow::grid::{Cell, Scenario, UNREACHABLE};

fn main() {
    let s = Scenario::from_ascii(
        &[
            "A....#......",
            ".###.#.####.",
            ".#...#....#.",
            ".#.#.###..#.",
            "...#...#..#G",
            "####.#.#....",
            "A....#......",
        ],
        0.5,
        0,
    )
    .expect("rectangular map");
    let field = &s.goals;

    for r in 0..field.distance.rows() {
        let line: String = (0..field.distance.cols())
            .map(|c| match field.distance[Cell::new(r, c)] {
                UNREACHABLE => " ##".to_string(),
                d => format!("{d:3}"),
            })
            .collect();
        println!("{line}");
    }
    for start in s.agents.agent_cells() {
        let path = field.greedy_path(start).expect("agent on the map");
        println!("agent at {start:?}: {} steps, ends at {:?}", path.len() - 1, path.last().unwrap());
    }
}
