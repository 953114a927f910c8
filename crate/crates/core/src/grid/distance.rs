use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{Cell, Environment, Grid2D, GridError};

/// Distance sentinel for obstacle cells and cells with no path to a goal.
pub const UNREACHABLE: u32 = u32::MAX;

/// Multi-source shortest path lengths to the nearest goal, 4-connected with
/// unit step cost through navigable cells.
pub fn distance_field(env: &Environment, goals: &Grid2D<bool>) -> Result<Grid2D<u32>, GridError> {
    env.grid().same_dims(goals)?;
    if let Some((cell, _)) = goals.iter().find(|(c, &g)| g && !env.is_navigable(*c)) {
        return Err(GridError::GoalOnObstacle(cell));
    }

    let mut dist = Grid2D::filled(goals.rows(), goals.cols(), UNREACHABLE)?;
    let mut queue = VecDeque::new();
    for (cell, &g) in goals.iter() {
        if g {
            dist[cell] = 0;
            queue.push_back(cell);
        }
    }
    if queue.is_empty() {
        return Err(GridError::NoGoal);
    }

    while let Some(cell) = queue.pop_front() {
        let next = dist[cell] + 1;
        for nb in goals.neighbors4(cell) {
            if env.is_navigable(nb) && dist[nb] == UNREACHABLE {
                dist[nb] = next;
                queue.push_back(nb);
            }
        }
    }
    Ok(dist)
}

/// Steepest descent on a distance grid until a zero cell is reached. Ties
/// between equally low neighbors go to the lexicographically smallest cell.
///
/// Works on any grid of path lengths, including compressed goal channels
/// whose values are not unit-step exact.
pub fn greedy_descent(dist: &Grid2D<u32>, start: Cell) -> Result<Vec<Cell>, GridError> {
    let mut current = start;
    let mut value = *dist.get(start).ok_or(GridError::OutOfBounds(start))?;
    if value == UNREACHABLE {
        return Err(GridError::Unreachable(start));
    }
    let mut path = vec![start];
    while value > 0 {
        let best = dist
            .neighbors4(current)
            .map(|nb| (dist[nb], nb))
            .filter(|(d, _)| *d < value)
            .min()
            .ok_or(GridError::LocalMinimum(current))?;
        (value, current) = best;
        path.push(current);
    }
    Ok(path)
}

/// Raw goal markers together with their distance field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalField {
    pub markers: Grid2D<bool>,
    pub distance: Grid2D<u32>,
}

impl GoalField {
    pub fn new(env: &Environment, markers: Grid2D<bool>) -> Result<Self, GridError> {
        let distance = distance_field(env, &markers)?;
        Ok(Self { markers, distance })
    }

    pub fn distance_at(&self, cell: Cell) -> u32 {
        self.distance.get(cell).copied().unwrap_or(UNREACHABLE)
    }

    pub fn goal_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.markers.iter().filter(|(_, &g)| g).map(|(c, _)| c)
    }

    /// Path from `start` to its closest goal, `distance(start) + 1` cells long.
    pub fn greedy_path(&self, start: Cell) -> Result<Vec<Cell>, GridError> {
        greedy_descent(&self.distance, start)
    }

    /// Largest finite distance, or 0 when every cell is unreachable.
    pub fn max_finite(&self) -> u32 {
        self.distance.values().iter().copied().filter(|&d| d != UNREACHABLE).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::CellClass;

    fn env_from(rows: &[&str]) -> Environment {
        let r = rows.len();
        let c = rows[0].len();
        let cells = rows
            .iter()
            .flat_map(|s| s.chars().map(|ch| if ch == '#' { CellClass::Obstacle } else { CellClass::Navigable }))
            .collect();
        Environment::new(Grid2D::from_vec(r, c, cells).unwrap(), 0.5).unwrap()
    }

    fn goals_at(dims: (usize, usize), cells: &[Cell]) -> Grid2D<bool> {
        Grid2D::from_fn(dims.0, dims.1, |c| cells.contains(&c)).unwrap()
    }

    #[test]
    fn single_cell_goal_is_zero() {
        let env = Environment::open(1, 1).unwrap();
        let d = distance_field(&env, &goals_at((1, 1), &[Cell::new(0, 0)])).unwrap();
        assert_eq!(d.values(), &[0]);
    }

    #[test]
    fn corridor_counts_steps() {
        let env = Environment::open(1, 3).unwrap();
        let d = distance_field(&env, &goals_at((1, 3), &[Cell::new(0, 0)])).unwrap();
        assert_eq!(d.values(), &[0, 1, 2]);
    }

    #[test]
    fn wall_disconnects_bottom_row() {
        let env = env_from(&["...", "###", "..."]);
        let d = distance_field(&env, &goals_at((3, 3), &[Cell::new(0, 1)])).unwrap();
        for c in 0..3 {
            assert_eq!(d[Cell::new(2, c)], UNREACHABLE);
            assert_eq!(d[Cell::new(1, c)], UNREACHABLE);
        }
        assert_eq!(d[Cell::new(0, 0)], 1);
    }

    #[test]
    fn goal_errors() {
        let env = env_from(&["#.."]);
        assert_eq!(distance_field(&env, &goals_at((1, 3), &[])), Err(GridError::NoGoal));
        assert_eq!(
            distance_field(&env, &goals_at((1, 3), &[Cell::new(0, 0)])),
            Err(GridError::GoalOnObstacle(Cell::new(0, 0)))
        );
    }

    #[test]
    fn greedy_path_corridor() {
        let env = Environment::open(1, 3).unwrap();
        let goals = GoalField::new(&env, goals_at((1, 3), &[Cell::new(0, 0)])).unwrap();
        assert_eq!(goals.greedy_path(Cell::new(0, 0)).unwrap(), vec![Cell::new(0, 0)]);
        assert_eq!(
            goals.greedy_path(Cell::new(0, 2)).unwrap(),
            vec![Cell::new(0, 2), Cell::new(0, 1), Cell::new(0, 0)]
        );
    }

    #[test]
    fn greedy_tie_breaks_to_smallest_cell() {
        // From (1,1) both (0,1) and (1,0) sit at distance 1 from the goal (0,0).
        let env = Environment::open(2, 2).unwrap();
        let goals = GoalField::new(&env, goals_at((2, 2), &[Cell::new(0, 0)])).unwrap();
        let start = Cell::new(1, 1);
        let candidates: Vec<Cell> = goals
            .distance
            .neighbors4(start)
            .filter(|&nb| goals.distance[nb] + 1 == goals.distance[start])
            .collect();
        assert_eq!(candidates.len(), 2);
        let expected = *candidates.iter().min().unwrap();
        assert_eq!(goals.greedy_path(start).unwrap()[1], expected);
        assert_eq!(expected, Cell::new(0, 1));
    }

    #[test]
    fn greedy_unreachable() {
        let env = env_from(&[".#."]);
        let goals = GoalField::new(&env, goals_at((1, 3), &[Cell::new(0, 0)])).unwrap();
        assert_eq!(goals.greedy_path(Cell::new(0, 2)), Err(GridError::Unreachable(Cell::new(0, 2))));
    }
}
