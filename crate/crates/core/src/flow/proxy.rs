use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;

use super::FlowError;
use crate::codec::FlowMap;
use crate::grid::{Cell, Grid2D, GridError, Scenario};

/// Extra traversal cost per unit of occupancy already routed through a cell.
pub const CONGESTION_WEIGHT: f64 = 0.5;
/// Agents within this Chebyshev distance belong to the same group.
const GROUP_RADIUS: usize = 2;

/// Max-normalizes a count map into `[0, 1]`; an all-zero map stays zero.
pub(crate) fn normalize(counts: &Grid2D<f64>) -> FlowMap {
    let max = counts.values().iter().copied().fold(0.0, f64::max);
    FlowMap::original(counts.map(|&v| if max > 0.0 { v / max } else { 0.0 }))
}

/// Visits per cell when every agent follows its greedy path to the goal.
pub fn proxy_sparse_counts(s: &Scenario) -> Result<Grid2D<f64>, FlowError> {
    let mut counts = s.agents.grid.map(|_| 0.0);
    for a in s.agents.agent_cells() {
        for c in s.goals.greedy_path(a)? {
            counts[c] += 1.0;
        }
    }
    Ok(counts)
}

pub fn proxy_sparse_flow(s: &Scenario) -> Result<FlowMap, FlowError> {
    Ok(normalize(&proxy_sparse_counts(s)?))
}

/// Agents linked by chains of Chebyshev distance at most 2, each group in
/// row-major order and groups ordered by their first member.
pub fn cohesive_groups(agents: &[Cell]) -> Vec<Vec<Cell>> {
    let mut parent: Vec<usize> = (0..agents.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..agents.len() {
        for j in i + 1..agents.len() {
            let (a, b) = (agents[i], agents[j]);
            if a.row.abs_diff(b.row) <= GROUP_RADIUS && a.col.abs_diff(b.col) <= GROUP_RADIUS {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut groups: Vec<Vec<Cell>> = Vec::new();
    let mut slot = vec![usize::MAX; agents.len()];
    let mut sorted: Vec<usize> = (0..agents.len()).collect();
    sorted.sort_by_key(|&i| agents[i]);
    for i in sorted {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(agents[i]);
    }
    groups
}

#[derive(PartialEq)]
struct Entry(f64, Cell);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn entry_cost(occupancy: &Grid2D<f64>, c: Cell) -> f64 {
    1.0 + CONGESTION_WEIGHT * occupancy[c]
}

/// Cost to the nearest goal when stepping into a cell costs
/// `1 + weight * occupancy`.
fn congestion_field(s: &Scenario, occupancy: &Grid2D<f64>) -> Grid2D<f64> {
    let mut cost = occupancy.map(|_| f64::INFINITY);
    let mut heap = BinaryHeap::new();
    for g in s.goals.goal_cells() {
        if s.env.is_navigable(g) {
            cost[g] = 0.0;
            heap.push(Entry(0.0, g));
        }
    }
    while let Some(Entry(d, c)) = heap.pop() {
        if d > cost[c] {
            continue;
        }
        let step = d + entry_cost(occupancy, c);
        for nb in occupancy.neighbors4(c) {
            if s.env.is_navigable(nb) && step < cost[nb] {
                cost[nb] = step;
                heap.push(Entry(step, nb));
            }
        }
    }
    cost
}

/// Cheapest route from `start` on a congestion field; ties go to the
/// lexicographically smallest neighbor, as in greedy descent.
fn route(cost: &Grid2D<f64>, occupancy: &Grid2D<f64>, start: Cell) -> Result<Vec<Cell>, FlowError> {
    if !cost[start].is_finite() {
        return Err(GridError::Unreachable(start).into());
    }
    let mut path = vec![start];
    let mut current = start;
    while cost[current] > 0.0 {
        let (_, next) = cost
            .neighbors4(current)
            .filter(|&nb| cost[nb].is_finite())
            .map(|nb| (cost[nb] + entry_cost(occupancy, nb), nb))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .ok_or(GridError::LocalMinimum(current))?;
        current = next;
        path.push(current);
    }
    Ok(path)
}

/// Visits per cell when each cohesive group routes its members one at a
/// time, in seeded order, around the cells its earlier members already use.
/// Groups do not see each other's congestion.
pub fn proxy_dense_counts(s: &Scenario) -> Result<Grid2D<f64>, FlowError> {
    let mut rng = crate::seed::rng(crate::seed::derive_seed(s.seed, 3));
    let mut total = s.agents.grid.map(|_| 0.0);
    for mut group in cohesive_groups(&s.agents.agent_cells()) {
        group.shuffle(&mut rng);
        let mut occupancy = total.map(|_| 0.0);
        for a in group {
            let cost = congestion_field(s, &occupancy);
            for c in route(&cost, &occupancy, a)? {
                occupancy[c] += 1.0;
            }
        }
        for (t, o) in total.values_mut().iter_mut().zip(occupancy.values()) {
            *t += o;
        }
    }
    Ok(total)
}

pub fn proxy_dense_flow(s: &Scenario) -> Result<FlowMap, FlowError> {
    Ok(normalize(&proxy_dense_counts(s)?))
}
