use rand::seq::SliceRandom;
use rand::Rng;

use super::{CrowdConfig, FlowError};
use crate::grid::{AgentField, Environment, Grid2D, Scenario};

const RETRIES: usize = 16;

/// Places 1 to 3 goals and the configured number of agents on distinct
/// navigable cells (agents may stand on goals), retrying until every agent
/// can reach a goal.
pub fn sample_agents_goals(env: &Environment, cfg: &CrowdConfig) -> Result<Scenario, FlowError> {
    let count = cfg.agent_count(env)?;
    let cells: Vec<_> = env.navigable_cells().collect();
    if count > cells.len() {
        return Err(FlowError::Infeasible(format!("{count} agents but only {} navigable cells", cells.len())));
    }
    let mut rng = crate::seed::rng(cfg.seed);
    let dims = env.dims();
    for _ in 0..RETRIES {
        let goal_count = rng.gen_range(1..=3).min(cells.len());
        let mut markers = Grid2D::filled(dims.rows, dims.cols, false)?;
        for &g in cells.choose_multiple(&mut rng, goal_count) {
            markers[g] = true;
        }
        let agents: Vec<_> = cells.choose_multiple(&mut rng, count).copied().collect();
        let s = Scenario::new(env.clone(), AgentField::from_cells(dims, &agents)?, markers, cfg.seed)?;
        if agents.iter().all(|&a| s.goals.distance_at(a) != crate::grid::UNREACHABLE) {
            return Ok(s);
        }
    }
    Err(FlowError::Infeasible(format!("no placement with every agent reaching a goal after {RETRIES} tries")))
}
