use serde::{Deserialize, Serialize};

use super::{distance_field, Cell, CellClass, Dims, Environment, GoalField, Grid2D, GridError, UNREACHABLE};

/// Agent occupancy. Uncompressed scenarios hold exactly 0 or 1 per cell;
/// compressed channels hold a density in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentField {
    pub grid: Grid2D<f64>,
}

impl AgentField {
    pub fn empty(dims: Dims) -> Result<Self, GridError> {
        Ok(Self { grid: Grid2D::filled(dims.rows, dims.cols, 0.0)? })
    }

    pub fn from_cells(dims: Dims, cells: &[Cell]) -> Result<Self, GridError> {
        let mut field = Self::empty(dims)?;
        for &cell in cells {
            if !field.grid.in_bounds(cell) {
                return Err(GridError::OutOfBounds(cell));
            }
            field.grid[cell] = 1.0;
        }
        Ok(field)
    }

    /// Cells holding an agent, in row-major order.
    pub fn agent_cells(&self) -> Vec<Cell> {
        self.grid.iter().filter(|(_, &v)| v > 0.0).map(|(c, _)| c).collect()
    }

    pub fn total(&self) -> f64 {
        self.grid.values().iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub env: Environment,
    pub agents: AgentField,
    pub goals: GoalField,
    pub seed: u64,
}

impl Scenario {
    /// Builds a scenario and its goal distance field. Does not validate;
    /// see [`validate_scenario`].
    pub fn new(env: Environment, agents: AgentField, goal_markers: Grid2D<bool>, seed: u64) -> Result<Self, GridError> {
        env.grid().same_dims(&agents.grid)?;
        let goals = GoalField::new(&env, goal_markers)?;
        Ok(Self { env, agents, goals, seed })
    }

    pub fn dims(&self) -> Dims {
        self.env.dims()
    }

    pub fn agent_count(&self) -> usize {
        self.agents.agent_cells().len()
    }

    /// Parses the text layout: `#` obstacle, `.` open, `A` agent, `G` goal,
    /// `@` agent standing on a goal.
    pub fn from_ascii(rows: &[impl AsRef<str>], cell_width: f64, seed: u64) -> Result<Self, GridError> {
        let height = rows.len();
        let width = rows.first().map(|r| r.as_ref().chars().count()).unwrap_or(0);
        let mut classes = Vec::with_capacity(height * width);
        let mut agents = Vec::new();
        let mut goals = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.chars().count() != width {
                return Err(GridError::Parse { line: i + 1, reason: format!("expected {width} columns") });
            }
            for (j, ch) in row.chars().enumerate() {
                let cell = Cell::new(i, j);
                let class = match ch {
                    '#' => CellClass::Obstacle,
                    '.' => CellClass::Navigable,
                    'A' => {
                        agents.push(cell);
                        CellClass::Navigable
                    }
                    'G' => {
                        goals.push(cell);
                        CellClass::Navigable
                    }
                    '@' => {
                        agents.push(cell);
                        goals.push(cell);
                        CellClass::Navigable
                    }
                    other => {
                        return Err(GridError::Parse { line: i + 1, reason: format!("unknown cell symbol {other:?}") })
                    }
                };
                classes.push(class);
            }
        }
        let env = Environment::new(Grid2D::from_vec(height, width, classes)?, cell_width)?;
        let dims = env.dims();
        let agents = AgentField::from_cells(dims, &agents)?;
        let markers = Grid2D::from_fn(dims.rows, dims.cols, |c| goals.contains(&c))?;
        Self::new(env, agents, markers, seed)
    }

    pub fn to_ascii(&self) -> Vec<String> {
        (0..self.env.dims().rows)
            .map(|i| {
                (0..self.env.dims().cols)
                    .map(|j| {
                        let cell = Cell::new(i, j);
                        let agent = self.agents.grid[cell] > 0.0;
                        let goal = self.goals.markers[cell];
                        match (self.env.is_navigable(cell), agent, goal) {
                            (false, _, _) => '#',
                            (true, true, true) => '@',
                            (true, true, false) => 'A',
                            (true, false, true) => 'G',
                            (true, false, false) => '.',
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    DimensionMismatch { grid: String, expected: Dims, actual: Dims },
    AgentNotBinary(Cell),
    AgentOnObstacle(Cell),
    AgentCannotReachGoal(Cell),
    GoalOnObstacle(Cell),
    NoGoal,
    /// Stored goal distance disagrees with a fresh distance field.
    StaleDistance { cell: Cell, stored: u32, expected: u32 },
}

/// Lists every broken scenario invariant; empty means well-formed.
pub fn validate_scenario(s: &Scenario) -> Vec<Violation> {
    let dims = s.env.dims();
    let mut out = Vec::new();
    for (name, actual) in
        [("agents", s.agents.grid.dims()), ("goal markers", s.goals.markers.dims()), ("goal distance", s.goals.distance.dims())]
    {
        if actual != dims {
            out.push(Violation::DimensionMismatch { grid: name.to_string(), expected: dims, actual });
        }
    }
    if !out.is_empty() {
        return out;
    }

    for (cell, &g) in s.goals.markers.iter() {
        if g && !s.env.is_navigable(cell) {
            out.push(Violation::GoalOnObstacle(cell));
        }
    }
    if !s.goals.markers.values().iter().any(|&g| g) {
        out.push(Violation::NoGoal);
    }

    let fresh = distance_field(&s.env, &s.goals.markers).ok();
    if let Some(fresh) = &fresh {
        for (cell, &expected) in fresh.iter() {
            let stored = s.goals.distance[cell];
            if stored != expected {
                out.push(Violation::StaleDistance { cell, stored, expected });
            }
        }
    }

    for (cell, &v) in s.agents.grid.iter() {
        if v != 0.0 && v != 1.0 {
            out.push(Violation::AgentNotBinary(cell));
        }
        if v == 0.0 {
            continue;
        }
        if !s.env.is_navigable(cell) {
            out.push(Violation::AgentOnObstacle(cell));
        } else if fresh.as_ref().is_none_or(|d| d[cell] == UNREACHABLE) {
            out.push(Violation::AgentCannotReachGoal(cell));
        }
    }
    out
}
