use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{AgentTrack, FlowError, Trajectories};
use crate::grid::{Cell, Scenario, UNREACHABLE};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SocialForceParams {
    /// m/s
    pub desired_speed: f64,
    /// s
    pub relaxation_time: f64,
    /// Agent repulsion potential strength, m²/s².
    pub agent_strength: f64,
    /// Agent repulsion decay length, m.
    pub agent_range: f64,
    /// Agents farther apart than this do not interact, m.
    pub agent_cutoff: f64,
    /// Wall repulsion potential strength, m²/s².
    pub wall_strength: f64,
    /// Wall repulsion decay length, m.
    pub wall_range: f64,
    /// s
    pub timestep: f64,
    pub max_steps: usize,
    /// Amplitude of the random acceleration that breaks symmetric standoffs, m/s².
    pub noise: f64,
}

impl Default for SocialForceParams {
    fn default() -> Self {
        Self {
            desired_speed: 1.3,
            relaxation_time: 0.5,
            agent_strength: 2.1,
            agent_range: 0.3,
            agent_cutoff: 2.0,
            wall_strength: 2.0,
            wall_range: 0.1,
            timestep: 0.05,
            max_steps: 2000,
            noise: 1.0,
        }
    }
}

impl SocialForceParams {
    pub fn validate(&self) -> Result<(), FlowError> {
        let positive = [
            ("desired_speed", self.desired_speed),
            ("relaxation_time", self.relaxation_time),
            ("agent_strength", self.agent_strength),
            ("agent_range", self.agent_range),
            ("agent_cutoff", self.agent_cutoff),
            ("wall_strength", self.wall_strength),
            ("wall_range", self.wall_range),
            ("timestep", self.timestep),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(FlowError::ParamOutOfRange(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_steps == 0 {
            return Err(FlowError::ParamOutOfRange("max_steps must be at least 1".into()));
        }
        if self.timestep > self.relaxation_time {
            return Err(FlowError::ParamOutOfRange("timestep exceeds relaxation_time".into()));
        }
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(FlowError::ParamOutOfRange(format!("noise must be non-negative, got {}", self.noise)));
        }
        Ok(())
    }
}

type V2 = (f64, f64);

fn sub(a: V2, b: V2) -> V2 {
    (a.0 - b.0, a.1 - b.1)
}

fn norm(a: V2) -> f64 {
    a.0.hypot(a.1)
}

struct World<'a> {
    s: &'a Scenario,
    w: f64,
}

impl World<'_> {
    fn cell(&self, p: V2) -> Option<Cell> {
        let (col, row) = ((p.0 / self.w).floor(), (p.1 / self.w).floor());
        let d = self.s.dims();
        (col >= 0.0 && row >= 0.0 && (row as usize) < d.rows && (col as usize) < d.cols)
            .then(|| Cell::new(row as usize, col as usize))
    }

    fn free(&self, p: V2) -> bool {
        self.cell(p).is_some_and(|c| self.s.env.is_navigable(c))
    }

    fn center(&self, c: Cell) -> V2 {
        ((c.col as f64 + 0.5) * self.w, (c.row as f64 + 0.5) * self.w)
    }

    /// Center of the next cell on the greedy path from `c`.
    fn waypoint(&self, c: Cell) -> Option<V2> {
        let dist = &self.s.goals.distance;
        let d = dist[c];
        if d == UNREACHABLE || d == 0 {
            return None;
        }
        dist.neighbors4(c).map(|nb| (dist[nb], nb)).filter(|(v, _)| *v < d).min().map(|(_, nb)| self.center(nb))
    }

    /// Repulsion from obstacle cells and the outer boundary within two cells.
    fn wall_force(&self, p: V2, c: Cell, params: &SocialForceParams) -> V2 {
        let mut f = (0.0, 0.0);
        let d = self.s.dims();
        for dr in -2i64..=2 {
            for dc in -2i64..=2 {
                let (r, cc) = (c.row as i64 + dr, c.col as i64 + dc);
                let inside = r >= 0 && cc >= 0 && (r as usize) < d.rows && (cc as usize) < d.cols;
                if inside && self.s.env.is_navigable(Cell::new(r as usize, cc as usize)) {
                    continue;
                }
                let (x0, y0) = (cc as f64 * self.w, r as f64 * self.w);
                let q = (p.0.clamp(x0, x0 + self.w), p.1.clamp(y0, y0 + self.w));
                let v = sub(p, q);
                let dist = norm(v);
                if dist > 0.0 {
                    let mag = params.wall_strength / params.wall_range * (-dist / params.wall_range).exp();
                    f.0 += mag * v.0 / dist;
                    f.1 += mag * v.1 / dist;
                }
            }
        }
        f
    }
}

/// Integrates a social-force crowd until every agent reaches a goal cell or
/// `max_steps` elapse. Forces for a frame come from the positions at its
/// start; agents leave the simulation on entering a goal cell.
pub fn simulate_social_force(s: &Scenario, params: &SocialForceParams) -> Result<Trajectories, FlowError> {
    params.validate()?;
    let world = World { s, w: s.env.cell_width() };
    let mut rng = crate::seed::rng(crate::seed::derive_seed(s.seed, 4));
    let starts = s.agents.agent_cells();
    for &a in &starts {
        if s.goals.distance_at(a) == UNREACHABLE {
            return Err(crate::grid::GridError::Unreachable(a).into());
        }
    }

    let mut pos: Vec<V2> = starts.iter().map(|&c| world.center(c)).collect();
    let mut vel: Vec<V2> = vec![(0.0, 0.0); pos.len()];
    let mut tracks: Vec<AgentTrack> =
        (0..pos.len()).map(|id| AgentTrack { id, positions: vec![pos[id]], finished: false }).collect();
    let mut active: Vec<usize> = Vec::new();
    for (i, &c) in starts.iter().enumerate() {
        if s.goals.markers[c] {
            tracks[i].finished = true;
        } else {
            active.push(i);
        }
    }

    let bucket = params.agent_cutoff.max(world.w);
    let max_speed = 1.3 * params.desired_speed;
    let dt = params.timestep;
    let mut frames = 1;
    while !active.is_empty() && frames <= params.max_steps {
        let snapshot = pos.clone();
        let mut buckets: std::collections::HashMap<(i64, i64), Vec<usize>> = std::collections::HashMap::new();
        for &i in &active {
            let key = ((snapshot[i].0 / bucket).floor() as i64, (snapshot[i].1 / bucket).floor() as i64);
            buckets.entry(key).or_default().push(i);
        }

        let mut accel = Vec::with_capacity(active.len());
        for &i in &active {
            let p = snapshot[i];
            let c = world.cell(p).expect("agents stay on the grid");
            let desired = match world.waypoint(c) {
                Some(target) => {
                    let d = sub(target, p);
                    let len = norm(d);
                    if len > 0.0 {
                        (params.desired_speed * d.0 / len, params.desired_speed * d.1 / len)
                    } else {
                        (0.0, 0.0)
                    }
                }
                None => (0.0, 0.0),
            };
            let mut f = ((desired.0 - vel[i].0) / params.relaxation_time, (desired.1 - vel[i].1) / params.relaxation_time);

            let key = ((p.0 / bucket).floor() as i64, (p.1 / bucket).floor() as i64);
            for bx in key.0 - 1..=key.0 + 1 {
                for by in key.1 - 1..=key.1 + 1 {
                    for &j in buckets.get(&(bx, by)).map(Vec::as_slice).unwrap_or(&[]) {
                        if j == i {
                            continue;
                        }
                        let v = sub(p, snapshot[j]);
                        let d = norm(v);
                        if d > 0.0 && d < params.agent_cutoff {
                            let mag = params.agent_strength / params.agent_range * (-d / params.agent_range).exp();
                            f.0 += mag * v.0 / d;
                            f.1 += mag * v.1 / d;
                        }
                    }
                }
            }
            let wall = world.wall_force(p, c, params);
            f.0 += wall.0 + params.noise * rng.gen_range(-1.0..=1.0);
            f.1 += wall.1 + params.noise * rng.gen_range(-1.0..=1.0);
            accel.push(f);
        }

        let mut still = Vec::with_capacity(active.len());
        for (&i, f) in active.iter().zip(accel) {
            let mut v = (vel[i].0 + f.0 * dt, vel[i].1 + f.1 * dt);
            let speed = norm(v);
            if speed > max_speed {
                v = (v.0 * max_speed / speed, v.1 * max_speed / speed);
            }
            let p = pos[i];
            let target = (p.0 + v.0 * dt, p.1 + v.1 * dt);
            let next = if world.free(target) {
                target
            } else if world.free((target.0, p.1)) {
                v.1 = 0.0;
                (target.0, p.1)
            } else if world.free((p.0, target.1)) {
                v.0 = 0.0;
                (p.0, target.1)
            } else {
                v = (0.0, 0.0);
                p
            };
            pos[i] = next;
            vel[i] = v;
            tracks[i].positions.push(next);
            let c = world.cell(next).expect("projected positions stay on the grid");
            if s.goals.markers[c] {
                tracks[i].finished = true;
            } else {
                still.push(i);
            }
        }
        active = still;
        frames += 1;
    }

    Ok(Trajectories { cell_width: world.w, frames, agents: tracks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::accumulate_flow;

    #[test]
    fn rejects_bad_params() {
        let s = Scenario::from_ascii(&["A.G"], 0.5, 0).unwrap();
        let p = SocialForceParams { timestep: 1.0, ..Default::default() };
        assert!(matches!(simulate_social_force(&s, &p), Err(FlowError::ParamOutOfRange(_))));
        let p = SocialForceParams { desired_speed: 0.0, ..Default::default() };
        assert!(simulate_social_force(&s, &p).is_err());
    }

    #[test]
    fn free_walk_arrives_on_time() {
        let mut rows = vec![".".repeat(41); 9];
        rows[4] = format!("..A{}G..", ".".repeat(35));
        let s = Scenario::from_ascii(&rows, 0.5, 5).unwrap();
        let params = SocialForceParams::default();
        let t = simulate_social_force(&s, &params).unwrap();
        let track = &t.agents[0];
        assert!(track.finished);
        let goal = (38.5 * 0.5, 4.5 * 0.5);
        let d: Vec<f64> = track.positions.iter().map(|&p| norm(sub(goal, p))).collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]), "distance must shrink every frame");
        // From the start cell center to the near edge of the goal cell.
        let expected = (38.0 - 2.5) * 0.5 / params.desired_speed;
        let took = (track.positions.len() - 1) as f64 * params.timestep;
        assert!((took - expected).abs() <= 0.2 * expected, "took {took}s, expected {expected}s");
    }

    #[test]
    fn deterministic_replay() {
        let s = Scenario::from_ascii(&["A...#...", "..A.#.G.", "........", "A..A#..."], 0.5, 8).unwrap();
        let p = SocialForceParams::default();
        assert_eq!(simulate_social_force(&s, &p).unwrap(), simulate_social_force(&s, &p).unwrap());
    }

    #[test]
    fn agent_on_goal_finishes_immediately() {
        let s = Scenario::from_ascii(&["@.."], 0.5, 0).unwrap();
        let t = simulate_social_force(&s, &SocialForceParams::default()).unwrap();
        assert_eq!(t.frames, 1);
        assert!(t.agents[0].finished);
        assert_eq!(accumulate_flow(&t, &s.env).grid[Cell::new(0, 0)], 1.0);
    }
}
