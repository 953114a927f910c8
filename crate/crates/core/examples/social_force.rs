//! Simulates a dense crowd on generated floorplans and compares the
//! accumulated flow with the dense proxy flow.
//!
//! cargo run --release --example social_force -- [plans] [density]

use cageflow::codec::FlowMap;
use cageflow::floorplan::{generate, typology, FloorplanConfig};
use cageflow::flow::{
    accumulate_flow, proxy_dense_flow, sample_agents_goals, simulate_social_force, CrowdConfig, SocialForceParams,
};
use cageflow::metrics::masked_kl;
use cageflow::seed::derive_seed;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let plans: usize = args.first().and_then(|a| a.parse().ok()).unwrap_or(12);
    let density: f64 = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(0.1);
    let params = SocialForceParams::default();

    for i in 0..plans {
        let seed = derive_seed(2024, i as u64);
        let (m, o) = typology(i);
        let f = generate(&FloorplanConfig::new(m, o, 32, 40, seed)).expect("valid floorplan config");
        let s = sample_agents_goals(&f.env, &CrowdConfig::dense(density, seed)).expect("feasible crowd");
        let t = simulate_social_force(&s, &params).expect("valid parameters");
        let finished = t.agents.iter().filter(|a| a.finished).count();
        let inside_walls = t
            .agents
            .iter()
            .flat_map(|a| &a.positions)
            .filter(|&&p| t.cell_at(p).is_none_or(|c| !s.env.is_navigable(c)))
            .count();

        let mask = s.env.navigable_mask();
        let simulated = accumulate_flow(&t, &s.env);
        let proxy = proxy_dense_flow(&s).expect("validated scenario");
        let uniform = FlowMap::original(mask.map(|&m| if m { 1.0 } else { 0.0 }));
        println!(
            "{m:?}/{o:?}: {finished}/{} arrived in {} frames, {inside_walls} positions inside walls, \
             KL(sim||proxy) {:.3}, KL(sim||uniform) {:.3}",
            t.agents.len(),
            t.frames,
            masked_kl(&proxy, &simulated, &mask).unwrap_or(f64::NAN),
            masked_kl(&uniform, &simulated, &mask).unwrap_or(f64::NAN),
        );
    }
}
