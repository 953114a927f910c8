//! Grid primitives, goal distance fields and greedy navigation.
//!
//! Cells are addressed 0-based as `(row, col)`. Row-major order is the
//! canonical iteration order everywhere in the crate, and "lexicographically
//! smallest" always means smallest `(row, col)`.

mod distance;
mod scenario;

pub use distance::{distance_field, greedy_descent, GoalField, UNREACHABLE};
pub use scenario::{validate_scenario, AgentField, Scenario, Violation};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid must have at least one row and one column (got {rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("value count {len} does not match {rows}x{cols}")]
    LengthMismatch { rows: usize, cols: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: Dims, actual: Dims },
    #[error("environment has no navigable cell")]
    NoNavigableCell,
    #[error("cell width must be positive and finite (got {0})")]
    BadCellWidth(f64),
    #[error("no goal marker lies on a navigable cell")]
    NoGoal,
    #[error("goal marker on obstacle cell {0}")]
    GoalOnObstacle(Cell),
    #[error("cell {0} cannot reach any goal")]
    Unreachable(Cell),
    #[error("cell {0} is outside the grid")]
    OutOfBounds(Cell),
    #[error("greedy descent stuck at {0}: no neighbor with a smaller distance")]
    LocalMinimum(Cell),
    #[error("bad scenario text at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub rows: usize,
    pub cols: usize,
}

impl Dims {
    pub const fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols }
    }

    pub fn area(&self) -> usize {
        self.rows * self.cols
    }

    pub fn fits_within(&self, side: usize) -> bool {
        self.rows <= side && self.cols <= side
    }
}

impl std::fmt::Display for Dims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

/// Axis-aligned cell rectangle, half-open on both axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub row: usize,
    pub col: usize,
    pub rows: usize,
    pub cols: usize,
}

impl Rect {
    pub const fn new(row: usize, col: usize, rows: usize, cols: usize) -> Self {
        Self { row, col, rows, cols }
    }

    pub fn bottom(&self) -> usize {
        self.row + self.rows
    }

    pub fn right(&self) -> usize {
        self.col + self.cols
    }

    pub fn area(&self) -> usize {
        self.rows * self.cols
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.row >= self.row && cell.row < self.bottom() && cell.col >= self.col && cell.col < self.right()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (self.row..self.bottom()).flat_map(move |r| (self.col..self.right()).map(move |c| Cell::new(r, c)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn perpendicular(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

/// Dense row-major 2D array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid2D<T> {
    rows: usize,
    cols: usize,
    values: Vec<T>,
}

impl<T: Clone> Grid2D<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Result<Self, GridError> {
        check_nonempty(rows, cols)?;
        Ok(Self { rows, cols, values: vec![value; rows * cols] })
    }
}

impl<T> Grid2D<T> {
    pub fn from_vec(rows: usize, cols: usize, values: Vec<T>) -> Result<Self, GridError> {
        check_nonempty(rows, cols)?;
        if values.len() != rows * cols {
            return Err(GridError::LengthMismatch { rows, cols, len: values.len() });
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(Cell) -> T) -> Result<Self, GridError> {
        check_nonempty(rows, cols)?;
        let values = (0..rows * cols).map(|k| f(Cell::new(k / cols, k % cols))).collect();
        Ok(Self { rows, cols, values })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> Dims {
        Dims::new(self.rows, self.cols)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn in_bounds(&self, cell: Cell) -> bool {
        cell.row < self.rows && cell.col < self.cols
    }

    pub fn offset(&self, cell: Cell, drow: isize, dcol: isize) -> Option<Cell> {
        let r = cell.row.checked_add_signed(drow)?;
        let c = cell.col.checked_add_signed(dcol)?;
        (r < self.rows && c < self.cols).then_some(Cell::new(r, c))
    }

    pub fn get(&self, cell: Cell) -> Option<&T> {
        self.in_bounds(cell).then(|| &self.values[cell.row * self.cols + cell.col])
    }

    pub fn cell_of(&self, index: usize) -> Cell {
        Cell::new(index / self.cols, index % self.cols)
    }

    pub fn index_of(&self, cell: Cell) -> usize {
        cell.row * self.cols + cell.col
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> {
        let cols = self.cols;
        (0..self.rows * self.cols).map(move |k| Cell::new(k / cols, k % cols))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Cell, &T)> {
        let cols = self.cols;
        self.values.iter().enumerate().map(move |(k, v)| (Cell::new(k / cols, k % cols), v))
    }

    /// In-bounds 4-neighbors in lexicographic order: up, left, right, down.
    pub fn neighbors4(&self, cell: Cell) -> impl Iterator<Item = Cell> + '_ {
        [(-1, 0), (0, -1), (0, 1), (1, 0)]
            .into_iter()
            .filter_map(move |(dr, dc)| self.offset(cell, dr, dc))
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid2D<U> {
        Grid2D { rows: self.rows, cols: self.cols, values: self.values.iter().map(f).collect() }
    }

    pub fn same_dims<U>(&self, other: &Grid2D<U>) -> Result<(), GridError> {
        if self.dims() == other.dims() {
            Ok(())
        } else {
            Err(GridError::DimensionMismatch { expected: self.dims(), actual: other.dims() })
        }
    }
}

impl<T> std::ops::Index<Cell> for Grid2D<T> {
    type Output = T;

    fn index(&self, cell: Cell) -> &T {
        assert!(self.in_bounds(cell), "cell {cell} outside {}x{} grid", self.rows, self.cols);
        &self.values[cell.row * self.cols + cell.col]
    }
}

impl<T> std::ops::IndexMut<Cell> for Grid2D<T> {
    fn index_mut(&mut self, cell: Cell) -> &mut T {
        assert!(self.in_bounds(cell), "cell {cell} outside {}x{} grid", self.rows, self.cols);
        &mut self.values[cell.row * self.cols + cell.col]
    }
}

fn check_nonempty(rows: usize, cols: usize) -> Result<(), GridError> {
    if rows == 0 || cols == 0 {
        Err(GridError::Empty { rows, cols })
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellClass {
    Navigable,
    Obstacle,
}

/// Discretized built environment. One cell is one agent diameter wide;
/// everything outside the grid counts as obstacle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    grid: Grid2D<CellClass>,
    cell_width: f64,
}

pub const DEFAULT_CELL_WIDTH: f64 = 0.5;

impl Environment {
    pub fn new(grid: Grid2D<CellClass>, cell_width: f64) -> Result<Self, GridError> {
        if !(cell_width.is_finite() && cell_width > 0.0) {
            return Err(GridError::BadCellWidth(cell_width));
        }
        if !grid.values().contains(&CellClass::Navigable) {
            return Err(GridError::NoNavigableCell);
        }
        Ok(Self { grid, cell_width })
    }

    pub fn from_navigable(mask: &Grid2D<bool>, cell_width: f64) -> Result<Self, GridError> {
        Self::new(mask.map(|&nav| if nav { CellClass::Navigable } else { CellClass::Obstacle }), cell_width)
    }

    /// Open rectangle with no interior obstacles.
    pub fn open(rows: usize, cols: usize) -> Result<Self, GridError> {
        Self::new(Grid2D::filled(rows, cols, CellClass::Navigable)?, DEFAULT_CELL_WIDTH)
    }

    pub fn grid(&self) -> &Grid2D<CellClass> {
        &self.grid
    }

    pub fn dims(&self) -> Dims {
        self.grid.dims()
    }

    pub fn cell_width(&self) -> f64 {
        self.cell_width
    }

    /// Out-of-bounds cells are obstacles.
    pub fn is_navigable(&self, cell: Cell) -> bool {
        matches!(self.grid.get(cell), Some(CellClass::Navigable))
    }

    pub fn navigable_mask(&self) -> Grid2D<bool> {
        self.grid.map(|c| *c == CellClass::Navigable)
    }

    pub fn navigable_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.grid.iter().filter(|(_, c)| **c == CellClass::Navigable).map(|(cell, _)| cell)
    }

    pub fn navigable_count(&self) -> usize {
        self.grid.values().iter().filter(|c| **c == CellClass::Navigable).count()
    }

    /// Navigable area in square meters.
    pub fn navigable_area(&self) -> f64 {
        self.navigable_count() as f64 * self.cell_width * self.cell_width
    }
}

/// Cells of `mask` 4-connected to any of `seeds` through `mask`.
pub fn flood_fill(mask: &Grid2D<bool>, seeds: impl IntoIterator<Item = Cell>) -> Grid2D<bool> {
    let mut seen = mask.map(|_| false);
    let mut stack: Vec<Cell> = seeds.into_iter().filter(|&c| mask.in_bounds(c) && mask[c]).collect();
    for &c in &stack {
        seen[c] = true;
    }
    while let Some(c) = stack.pop() {
        for nb in mask.neighbors4(c) {
            if mask[nb] && !seen[nb] {
                seen[nb] = true;
                stack.push(nb);
            }
        }
    }
    seen
}

/// Number of 4-connected components of the true cells.
pub fn components(mask: &Grid2D<bool>) -> usize {
    let mut seen = mask.map(|_| false);
    let mut count = 0;
    for cell in mask.cells() {
        if mask[cell] && !seen[cell] {
            count += 1;
            for (c, &v) in flood_fill(mask, [cell]).iter() {
                if v {
                    seen[c] = true;
                }
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_mismatched() {
        assert_eq!(Grid2D::<u8>::from_vec(0, 3, vec![]), Err(GridError::Empty { rows: 0, cols: 3 }));
        assert!(matches!(Grid2D::from_vec(2, 2, vec![1, 2, 3]), Err(GridError::LengthMismatch { .. })));
    }

    #[test]
    fn row_major_bijection() {
        let g = Grid2D::from_fn(3, 4, |c| c.row * 10 + c.col).unwrap();
        for (k, v) in g.values().iter().enumerate() {
            let cell = g.cell_of(k);
            assert_eq!(g.index_of(cell), k);
            assert_eq!(*v, cell.row * 10 + cell.col);
        }
    }

    #[test]
    fn neighbors_are_lexicographic() {
        let g = Grid2D::filled(3, 3, 0u8).unwrap();
        let n: Vec<_> = g.neighbors4(Cell::new(1, 1)).collect();
        let mut sorted = n.clone();
        sorted.sort();
        assert_eq!(n, sorted);
        assert_eq!(g.neighbors4(Cell::new(0, 0)).count(), 2);
    }

    #[test]
    fn environment_needs_navigable_cell() {
        let g = Grid2D::filled(2, 2, CellClass::Obstacle).unwrap();
        assert_eq!(Environment::new(g, 0.5), Err(GridError::NoNavigableCell));
        let env = Environment::open(2, 2).unwrap();
        assert!(!env.is_navigable(Cell::new(2, 0)));
    }
}
