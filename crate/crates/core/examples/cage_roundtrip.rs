//! Encode a generated floorplan scenario, write the tensor and plan, read
//! them back and check that agent mass and navigability survive.
//!
//! cargo run --example cage_roundtrip -- [seed] [n]

use cageflow::codec::format::{read_plan_file, read_raw_file, write_plan_file, write_raw_file, RawTensor};
use cageflow::codec::{agent_density, check_consistency, decompress_density, decompress_environment, encode};
use cageflow::dataset::{generate_sample, DatasetGroup, RunConfig};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let cfg = RunConfig { seed: args.first().copied().unwrap_or(1), n: args.get(1).copied().unwrap_or(32) as usize, ..Default::default() };
    let s = generate_sample(&cfg, DatasetGroup::SparseProxy, 0).expect("sample").scenario;

    let (plan, x) = encode(&s, cfg.n).expect("plan fits");
    println!("source {} -> compressed {} on a {n}x{n} canvas", plan.original, plan.compressed, n = cfg.n);
    println!("{} regions, consistency violations: {}", plan.regions.len(), check_consistency(&plan, &s.env).len());

    let dir = tempfile::tempdir().expect("temp dir");
    write_raw_file(&dir.path().join("x.tensor"), &RawTensor::from(&x)).unwrap();
    write_plan_file(&dir.path().join("plan.json"), &plan).unwrap();
    let raw = read_raw_file(&dir.path().join("x.tensor")).unwrap();
    let plan = read_plan_file(&dir.path().join("plan.json")).unwrap();
    println!("tensor header {:?}", raw.header);

    let restored = decompress_density(&agent_density(&x), &plan).unwrap();
    println!("agents: {} before, {:.9} after", s.agent_count(), restored.total());
    let env = decompress_environment(&plan, s.env.cell_width()).unwrap();
    println!("environment restored exactly: {}", env == s.env);
}
