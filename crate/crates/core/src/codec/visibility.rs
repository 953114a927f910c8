use serde::{Deserialize, Serialize};

use crate::grid::{Cell, Environment, Grid2D, Rect};

/// Axis visibility of a navigable cell: the length of the unobstructed
/// navigable run through the cell along x (`vx`) and along y (`vy`).
/// Obstacle cells carry `(0, 0)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Visibility {
    pub vx: u32,
    pub vy: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibilityGrid {
    pub grid: Grid2D<Visibility>,
}

pub fn visibility(env: &Environment) -> VisibilityGrid {
    let dims = env.dims();
    let mut grid = Grid2D::filled(dims.rows, dims.cols, Visibility::default()).expect("environment is non-empty");

    for r in 0..dims.rows {
        let mut c = 0;
        while c < dims.cols {
            if !env.is_navigable(Cell::new(r, c)) {
                c += 1;
                continue;
            }
            let start = c;
            while c < dims.cols && env.is_navigable(Cell::new(r, c)) {
                c += 1;
            }
            for k in start..c {
                grid[Cell::new(r, k)].vx = (c - start) as u32;
            }
        }
    }
    for c in 0..dims.cols {
        let mut r = 0;
        while r < dims.rows {
            if !env.is_navigable(Cell::new(r, c)) {
                r += 1;
                continue;
            }
            let start = r;
            while r < dims.rows && env.is_navigable(Cell::new(r, c)) {
                r += 1;
            }
            for k in start..r {
                grid[Cell::new(k, c)].vy = (r - start) as u32;
            }
        }
    }
    VisibilityGrid { grid }
}

/// A maximal axis-aligned block of navigable cells sharing one visibility
/// tuple; the unit of compression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub id: usize,
    pub tuple: Visibility,
    pub rect: Rect,
}

impl Region {
    pub fn extent_x(&self) -> usize {
        self.rect.cols
    }

    pub fn extent_y(&self) -> usize {
        self.rect.rows
    }
}

/// Partitions the navigable cells into equal-tuple rectangles with a
/// row-major sweep: each unassigned cell opens a region that grows right,
/// then down, as far as the tuple stays constant.
pub fn segment_regions(v: &VisibilityGrid, env: &Environment) -> Vec<Region> {
    let dims = env.dims();
    let mut taken = Grid2D::filled(dims.rows, dims.cols, false).expect("environment is non-empty");
    let mut regions = Vec::new();

    for cell in v.grid.cells() {
        if taken[cell] || !env.is_navigable(cell) {
            continue;
        }
        let tuple = v.grid[cell];
        let same = |c: Cell, taken: &Grid2D<bool>| env.is_navigable(c) && !taken[c] && v.grid[c] == tuple;

        let mut cols = 1;
        while cell.col + cols < dims.cols && same(Cell::new(cell.row, cell.col + cols), &taken) {
            cols += 1;
        }
        let mut rows = 1;
        while cell.row + rows < dims.rows
            && (cell.col..cell.col + cols).all(|c| same(Cell::new(cell.row + rows, c), &taken))
        {
            rows += 1;
        }

        let rect = Rect::new(cell.row, cell.col, rows, cols);
        for c in rect.cells() {
            taken[c] = true;
        }
        regions.push(Region { id: regions.len(), tuple, rect });
    }
    regions
}

/// Region index owning each source cell.
pub fn region_owners(regions: &[Region], env: &Environment) -> Grid2D<Option<usize>> {
    let dims = env.dims();
    let mut owners = Grid2D::filled(dims.rows, dims.cols, None).expect("environment is non-empty");
    for (k, region) in regions.iter().enumerate() {
        for c in region.rect.cells() {
            if owners.in_bounds(c) {
                owners[c] = Some(k);
            }
        }
    }
    owners
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Scenario;

    fn env(rows: &[&str]) -> Environment {
        Scenario::from_ascii(&rows.iter().map(|r| r.replace('.', "G")).collect::<Vec<_>>(), 0.5, 0).unwrap().env
    }

    #[test]
    fn open_room_is_one_region() {
        let e = Environment::open(4, 6).unwrap();
        let v = visibility(&e);
        assert!(v.grid.values().iter().all(|t| *t == Visibility { vx: 6, vy: 4 }));
        let regions = segment_regions(&v, &e);
        assert_eq!(regions.len(), 1);
        assert_eq!(regions[0].rect, Rect::new(0, 0, 4, 6));
    }

    #[test]
    fn staircase_is_fully_incompressible() {
        let e = env(&[".####", "..###", "...##", "....#", "....."]);
        let v = visibility(&e);
        let tuples: std::collections::HashSet<_> = e.navigable_cells().map(|c| v.grid[c]).collect();
        assert_eq!(tuples.len(), e.navigable_count());
        let regions = segment_regions(&v, &e);
        assert_eq!(regions.len(), e.navigable_count());
        assert!(regions.iter().all(|r| r.rect.area() == 1));
    }

    #[test]
    fn isolated_cell() {
        let e = env(&["###", "#.#", "###"]);
        assert_eq!(visibility(&e).grid[Cell::new(1, 1)], Visibility { vx: 1, vy: 1 });
        assert_eq!(visibility(&e).grid[Cell::new(0, 0)], Visibility::default());
    }

    #[test]
    fn doorway_forms_its_own_region() {
        // Two 3x3 rooms joined through a single door cell at (1, 3).
        let e = env(&["...#...", ".......", "...#..."]);
        let v = visibility(&e);
        let door = Cell::new(1, 3);
        assert_eq!(v.grid[door], Visibility { vx: 7, vy: 1 });
        let regions = segment_regions(&v, &e);
        let owners = region_owners(&regions, &e);
        let door_region = owners[door].unwrap();
        assert_eq!(regions[door_region].rect, Rect::new(1, 3, 1, 1));
        assert_ne!(owners[Cell::new(0, 0)], owners[Cell::new(0, 4)]);
        assert_ne!(owners[Cell::new(0, 0)], Some(door_region));
    }
}
