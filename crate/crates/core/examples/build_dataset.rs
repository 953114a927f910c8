//! Emits a small dataset for every group, verifies it and prints the
//! manifest summary.
//!
//! cargo run --release --example build_dataset -- [out-dir] [count]

use cageflow::dataset::{emit_dataset, verify_dataset, DatasetGroup, RunConfig};

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "dataset".into());
    let count = std::env::args().nth(2).and_then(|a| a.parse().ok()).unwrap_or(12);
    let cfg = RunConfig { out: out.into(), count, groups: DatasetGroup::ALL.to_vec(), n: 32, seed: 2024, ..Default::default() };

    let t0 = std::time::Instant::now();
    let manifests = emit_dataset(&cfg).expect("dataset");
    println!("emitted in {:.2?}", t0.elapsed());
    for m in manifests {
        let dir = cfg.out.join(m.group.name());
        let attempts: usize = m.samples.iter().map(|s| s.attempts).sum();
        let mean_agents = m.samples.iter().map(|s| s.agents).sum::<usize>() as f64 / m.samples.len() as f64;
        let problems = verify_dataset(&dir).expect("readable");
        println!(
            "{:<17} {:>3} samples  {:>4} attempts  {:>7.1} agents/sample  {} problems",
            m.group.name(),
            m.samples.len(),
            attempts,
            mean_agents,
            problems.len()
        );
    }
}
