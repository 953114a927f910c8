use cageflow::codec::{
    agent_density, check_consistency, compress_padded, decompress_density, plan_compression, segment_regions,
    visibility, CompressionPlan,
};
use cageflow::grid::{AgentField, Cell, Environment, Grid2D, Scenario};
use proptest::prelude::*;

fn env_strategy(max: usize) -> impl Strategy<Value = Environment> {
    (2..=max, 2..=max, 0.0..0.5f64, any::<u64>()).prop_map(|(rows, cols, density, seed)| {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut nav = Grid2D::from_fn(rows, cols, |_| !rng.gen_bool(density)).unwrap();
        nav[Cell::new(0, 0)] = true;
        Environment::from_navigable(&nav, 0.5).unwrap()
    })
}

fn plan(env: &Environment, n: usize) -> CompressionPlan {
    plan_compression(&segment_regions(&visibility(env), env), env, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn planner_output_is_always_consistent(env in env_strategy(40), n in 2usize..24) {
        let p = plan(&env, n);
        prop_assert_eq!(check_consistency(&p, &env), vec![]);
        prop_assert_eq!(p.fits(), p.compressed.fits_within(n));
        prop_assert!(p.compressed.rows <= env.dims().rows && p.compressed.cols <= env.dims().cols);
    }

    #[test]
    fn regions_partition_navigable_cells(env in env_strategy(30)) {
        let v = visibility(&env);
        let regions = segment_regions(&v, &env);
        let mut count = Grid2D::filled(env.dims().rows, env.dims().cols, 0u8).unwrap();
        for r in &regions {
            for c in r.rect.cells() {
                prop_assert!(env.is_navigable(c));
                prop_assert_eq!(v.grid[c], r.tuple);
                count[c] += 1;
            }
        }
        for (c, &k) in count.iter() {
            prop_assert_eq!(k, u8::from(env.is_navigable(c)));
        }
    }

    #[test]
    fn agent_mass_survives_round_trip(env in env_strategy(32), n in 2usize..20, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let cells: Vec<Cell> = env.navigable_cells().filter(|_| rng.gen_bool(0.3)).collect();
        let goal = Grid2D::from_fn(env.dims().rows, env.dims().cols, |c| c == Cell::new(0, 0)).unwrap();
        let agents = AgentField::from_cells(env.dims(), &cells).unwrap();
        let s = Scenario::new(env.clone(), agents, goal, seed).unwrap();
        let p = plan(&env, n);
        let side = p.compressed.rows.max(p.compressed.cols).max(n);
        let t = compress_padded(&s, &p, side).unwrap();
        let mut p_side = p.clone();
        p_side.target_n = side;
        let back = decompress_density(&agent_density(&t), &p_side).unwrap();
        prop_assert!((back.total() - cells.len() as f64).abs() <= 1e-6);
    }
}
