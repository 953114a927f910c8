use cageflow::floorplan::{generate, typology, FloorplanConfig};
use cageflow::flow::{
    accumulate_flow, cohesive_groups, proxy_dense_flow, proxy_sparse_flow, sample_agents_goals, simulate_social_force,
    CrowdConfig, CrowdSize, Regime, SocialForceParams, Trajectories,
};
use cageflow::grid::{validate_scenario, Cell, Environment};
use proptest::prelude::*;

fn floorplan_env(i: usize, seed: u64) -> Option<Environment> {
    let (m, o) = typology(i);
    generate(&FloorplanConfig::new(m, o, 20 + i % 9, 24 + i % 7, seed)).ok().map(|f| f.env)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sampled_scenarios_are_valid(i in 0usize..12, seed in any::<u64>(), dense in any::<bool>()) {
        let Some(env) = floorplan_env(i, seed) else { return Ok(()) };
        let crowd = if dense { CrowdConfig::dense(0.1, seed) } else { CrowdConfig::sparse(1 + (seed % 25) as usize, seed) };
        let s = sample_agents_goals(&env, &crowd).unwrap();
        prop_assert_eq!(validate_scenario(&s), vec![]);
        prop_assert_eq!(s.agent_count(), crowd.agent_count(&env).unwrap());
        prop_assert!(s.agents.agent_cells().iter().all(|&a| s.goals.distance_at(a) != cageflow::grid::UNREACHABLE));
        prop_assert_eq!(&sample_agents_goals(&env, &crowd).unwrap(), &s);
    }

    #[test]
    fn proxy_flows_are_normalized_on_navigable_cells(i in 0usize..12, seed in any::<u64>()) {
        let Some(env) = floorplan_env(i, seed) else { return Ok(()) };
        for (crowd, dense) in [(CrowdConfig::sparse(10, seed), false), (CrowdConfig::dense(0.12, seed), true)] {
            let s = sample_agents_goals(&env, &crowd).unwrap();
            let flow = if dense { proxy_dense_flow(&s) } else { proxy_sparse_flow(&s) }.unwrap();
            prop_assert_eq!(flow.max(), 1.0);
            for (c, &v) in flow.grid.iter() {
                prop_assert!((0.0..=1.0).contains(&v));
                prop_assert!(env.is_navigable(c) || v == 0.0);
            }
            for a in s.agents.agent_cells() {
                prop_assert!(flow.grid[a] > 0.0);
            }
        }
    }

    #[test]
    fn groups_partition_the_agents(cells in prop::collection::btree_set((0usize..20, 0usize..20), 0..40)) {
        let agents: Vec<Cell> = cells.iter().map(|&(r, c)| Cell::new(r, c)).collect();
        let groups = cohesive_groups(&agents);
        let mut all: Vec<Cell> = groups.iter().flatten().copied().collect();
        all.sort();
        prop_assert_eq!(all, agents.clone());
        let cheb = |a: Cell, b: Cell| a.row.abs_diff(b.row).max(a.col.abs_diff(b.col));
        for (i, g) in groups.iter().enumerate() {
            for h in &groups[i + 1..] {
                prop_assert!(g.iter().all(|&a| h.iter().all(|&b| cheb(a, b) > 2)));
            }
        }
    }

    #[test]
    fn accumulation_ignores_agent_order(seed in any::<u64>(), rot in 0usize..10) {
        let Some(env) = floorplan_env((seed % 12) as usize, seed) else { return Ok(()) };
        let s = sample_agents_goals(&env, &CrowdConfig::sparse(8, seed)).unwrap();
        let params = SocialForceParams { max_steps: 200, ..Default::default() };
        let t = simulate_social_force(&s, &params).unwrap();
        let mut shuffled = t.agents.clone();
        let k = rot % shuffled.len().max(1);
        shuffled.rotate_left(k);
        shuffled.reverse();
        let u = Trajectories { agents: shuffled, ..t.clone() };
        prop_assert_eq!(accumulate_flow(&t, &env), accumulate_flow(&u, &env));
    }
}

#[test]
fn crowd_sizes_are_checked() {
    let env = Environment::open(10, 10).unwrap();
    assert!(CrowdConfig::sparse(26, 0).agent_count(&env).is_err());
    assert!(CrowdConfig::dense(f64::NAN, 0).agent_count(&env).is_err());
    let thin = CrowdConfig { size: CrowdSize::Count(0), ..CrowdConfig::dense(0.1, 0) };
    assert!(thin.agent_count(&env).is_err());
    assert_eq!(CrowdConfig::sparse(5, 0).regime, Regime::Sparse);
}

#[test]
fn invalid_social_force_parameters_are_rejected() {
    let env = Environment::open(6, 6).unwrap();
    let s = sample_agents_goals(&env, &CrowdConfig::sparse(3, 1)).unwrap();
    let bad = SocialForceParams { timestep: 0.0, ..Default::default() };
    assert!(simulate_social_force(&s, &bad).is_err());
}
