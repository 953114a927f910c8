//! Fit rate and mean area ratio of generated floorplans per size band.
//!
//! cargo run --release --example compression_stats -- [n] [samples]

use cageflow::codec::{plan_compression, segment_regions, visibility};
use cageflow::floorplan::{generate, typology, FloorplanConfig};
use cageflow::seed::derive_seed;
use rand::Rng;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(32);
    let samples = args.get(1).copied().unwrap_or(120);

    for (lo, hi) in [(n / 2, n), (n, 3 * n / 2), (3 * n / 2, 2 * n), (2 * n, 4 * n)] {
        let (mut fit, mut built, mut ratio, mut regions) = (0, 0, 0.0, 0usize);
        for i in 0..samples {
            let seed = derive_seed(n as u64, i as u64);
            let mut rng = cageflow::seed::rng(seed);
            let (m, o) = typology(i);
            let cfg = FloorplanConfig::new(m, o, rng.gen_range(lo..=hi), rng.gen_range(lo..=hi), seed);
            let Ok(f) = generate(&cfg) else { continue };
            let r = segment_regions(&visibility(&f.env), &f.env);
            let plan = plan_compression(&r, &f.env, n);
            built += 1;
            regions += r.len();
            fit += plan.fits() as usize;
            ratio += plan.compressed.area() as f64 / f.env.dims().area() as f64;
        }
        println!(
            "sides {lo}..={hi}: {built} built, fit {:.1}%, mean area ratio {:.3}, mean regions {:.1}",
            100.0 * fit as f64 / built as f64,
            ratio / built as f64,
            regions as f64 / built as f64
        );
    }
}
