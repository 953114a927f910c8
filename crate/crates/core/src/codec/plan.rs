//! Compression planning.
//!
//! Every region is shrunk by an integer factor per axis that divides its
//! extent, so each compressed cell stands for a `factor_x x factor_y` block of
//! source cells. Regions that touch along one axis must agree on the factor
//! (and, when that factor exceeds one, on their extent) along the other axis.
//! Those agreements are tracked as union-find classes: one class per chain of
//! x-contiguous regions for the y factor and vice versa.
//!
//! The compressed regions are then laid out by walking the contiguity graph
//! from one anchor region per connected component. Any overlap, spurious
//! adjacency or cyclic offset mismatch found in the layout is repaired by
//! resetting to one the factors that made the offending pair's relative
//! placement differ from the source, then laying out again. Factors only
//! decrease, so this terminates; with every factor at one the layout is the
//! source geometry itself.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::visibility::{region_owners, Region, Visibility};
use crate::grid::{Axis, Cell, Dims, Environment, Grid2D, Rect};

pub const PLAN_VERSION: u32 = 1;

/// Outer non-navigable rows and columns dropped from the compressed canvas.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trim {
    pub top: usize,
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitStatus {
    Fits,
    DoesNotFit,
}

/// A region's source rectangle, its per-axis capacities and where it lands
/// on the compressed canvas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionPlan {
    pub id: usize,
    pub tuple: Visibility,
    pub source: Rect,
    pub factor_x: usize,
    pub factor_y: usize,
    pub compressed: Rect,
}

impl RegionPlan {
    pub fn capacity(&self) -> usize {
        self.factor_x * self.factor_y
    }

    /// Source block behind compressed cell `cell`, which must lie inside
    /// `self.compressed`.
    pub fn source_block(&self, cell: Cell) -> Rect {
        let lr = cell.row - self.compressed.row;
        let lc = cell.col - self.compressed.col;
        Rect::new(
            self.source.row + lr * self.factor_y,
            self.source.col + lc * self.factor_x,
            self.factor_y,
            self.factor_x,
        )
    }

    /// Compressed cell holding source cell `cell`, which must lie inside
    /// `self.source`.
    pub fn compressed_cell(&self, cell: Cell) -> Cell {
        Cell::new(
            self.compressed.row + (cell.row - self.source.row) / self.factor_y,
            self.compressed.col + (cell.col - self.source.col) / self.factor_x,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressionPlan {
    pub version: u32,
    pub target_n: usize,
    pub original: Dims,
    pub compressed: Dims,
    pub trim: Trim,
    pub status: FitStatus,
    pub regions: Vec<RegionPlan>,
}

impl CompressionPlan {
    /// Every capacity one, compressed canvas equal to the source canvas.
    pub fn identity(regions: &[Region], env: &Environment, target_n: usize) -> Self {
        let dims = env.dims();
        Self {
            version: PLAN_VERSION,
            target_n,
            original: dims,
            compressed: dims,
            trim: Trim::default(),
            status: fit_status(dims, target_n),
            regions: regions
                .iter()
                .map(|r| RegionPlan {
                    id: r.id,
                    tuple: r.tuple,
                    source: r.rect,
                    factor_x: 1,
                    factor_y: 1,
                    compressed: r.rect,
                })
                .collect(),
        }
    }

    pub fn fits(&self) -> bool {
        self.status == FitStatus::Fits
    }

    pub fn is_identity(&self) -> bool {
        self.compressed == self.original && self.regions.iter().all(|r| r.compressed == r.source && r.capacity() == 1)
    }

    /// Region index owning each compressed cell. Later regions win on
    /// overlap; [`super::check_consistency`] reports overlaps.
    pub fn compressed_owners(&self) -> Grid2D<Option<usize>> {
        let mut owners =
            Grid2D::filled(self.compressed.rows.max(1), self.compressed.cols.max(1), None).expect("non-empty");
        for (k, r) in self.regions.iter().enumerate() {
            for c in r.compressed.cells() {
                if owners.in_bounds(c) {
                    owners[c] = Some(k);
                }
            }
        }
        owners
    }

    /// Region index owning each source cell.
    pub fn source_owners(&self) -> Grid2D<Option<usize>> {
        let mut owners = Grid2D::filled(self.original.rows, self.original.cols, None).expect("non-empty");
        for (k, r) in self.regions.iter().enumerate() {
            for c in r.source.cells() {
                if owners.in_bounds(c) {
                    owners[c] = Some(k);
                }
            }
        }
        owners
    }

    fn capacity_grid(&self, pick: impl Fn(&RegionPlan) -> usize) -> Grid2D<u32> {
        let mut grid = Grid2D::filled(self.compressed.rows.max(1), self.compressed.cols.max(1), 1u32).expect("non-empty");
        for r in &self.regions {
            for c in r.compressed.cells() {
                if grid.in_bounds(c) {
                    grid[c] = pick(r) as u32;
                }
            }
        }
        grid
    }

    /// Per-cell capacity along x over the compressed canvas; one off-region.
    pub fn capacity_x(&self) -> Grid2D<u32> {
        self.capacity_grid(|r| r.factor_x)
    }

    /// Per-cell capacity along y over the compressed canvas; one off-region.
    pub fn capacity_y(&self) -> Grid2D<u32> {
        self.capacity_grid(|r| r.factor_y)
    }
}

fn fit_status(dims: Dims, n: usize) -> FitStatus {
    if dims.fits_within(n) {
        FitStatus::Fits
    } else {
        FitStatus::DoesNotFit
    }
}

/// Two regions sharing an edge: `before` is left of (`Axis::X`) or above
/// (`Axis::Y`) `after`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Contiguity {
    pub before: usize,
    pub after: usize,
    pub axis: Axis,
}

pub(crate) fn contiguities(owners: &Grid2D<Option<usize>>) -> Vec<Contiguity> {
    let mut set = BTreeSet::new();
    for (cell, &own) in owners.iter() {
        let Some(a) = own else { continue };
        for (axis, nb) in [(Axis::X, owners.offset(cell, 0, 1)), (Axis::Y, owners.offset(cell, 1, 0))] {
            if let Some(b) = nb.and_then(|nb| owners[nb]) {
                if a != b {
                    set.insert(Contiguity { before: a, after: b, axis });
                }
            }
        }
    }
    set.into_iter().collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct Layout {
    origin: Vec<(i64, i64)>,
    parent: Vec<Option<(usize, Contiguity)>>,
    conflicts: BTreeSet<(usize, usize)>,
}

struct Planner<'a> {
    regions: &'a [Region],
    adjacency: Vec<Vec<Contiguity>>,
    /// Class index per region for the x factor and the y factor.
    class_x: Vec<usize>,
    class_y: Vec<usize>,
    factor_x: Vec<usize>,
    factor_y: Vec<usize>,
    /// Factor each class would take if nothing constrained it.
    natural_x: Vec<usize>,
    natural_y: Vec<usize>,
}

impl<'a> Planner<'a> {
    fn new(regions: &'a [Region], env: &Environment) -> Self {
        let owners = region_owners(regions, env);
        let edges = contiguities(&owners);
        let n = regions.len();
        let mut adjacency = vec![Vec::new(); n];
        // x-contiguous regions share their y factor; y-contiguous share x.
        let mut uf_x = UnionFind::new(n);
        let mut uf_y = UnionFind::new(n);
        for e in &edges {
            adjacency[e.before].push(*e);
            adjacency[e.after].push(*e);
            match e.axis {
                Axis::X => uf_y.union(e.before, e.after),
                Axis::Y => uf_x.union(e.before, e.after),
            }
        }
        let class_x: Vec<usize> = (0..n).map(|k| uf_x.find(k)).collect();
        let class_y: Vec<usize> = (0..n).map(|k| uf_y.find(k)).collect();

        // Largest divisor of the shared extent: the whole extent when every
        // class member spans the same interval, otherwise no compression.
        let mut factor_x = vec![0usize; n];
        let mut factor_y = vec![0usize; n];
        let mut span_x: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut span_y: Vec<Option<(usize, usize)>> = vec![None; n];
        for (k, r) in regions.iter().enumerate() {
            let (cx, cy) = (class_x[k], class_y[k]);
            let sx = (r.rect.col, r.rect.cols);
            let sy = (r.rect.row, r.rect.rows);
            match span_x[cx] {
                None => {
                    span_x[cx] = Some(sx);
                    factor_x[cx] = r.rect.cols;
                }
                Some(s) if s != sx => factor_x[cx] = 1,
                _ => {}
            }
            match span_y[cy] {
                None => {
                    span_y[cy] = Some(sy);
                    factor_y[cy] = r.rect.rows;
                }
                Some(s) if s != sy => factor_y[cy] = 1,
                _ => {}
            }
        }

        let (natural_x, natural_y) = (factor_x.clone(), factor_y.clone());
        Self { regions, adjacency, class_x, class_y, factor_x, factor_y, natural_x, natural_y }
    }

    fn fx(&self, k: usize) -> usize {
        self.factor_x[self.class_x[k]]
    }

    fn fy(&self, k: usize) -> usize {
        self.factor_y[self.class_y[k]]
    }

    fn size(&self, k: usize) -> (i64, i64) {
        let r = &self.regions[k].rect;
        ((r.rows / self.fy(k)) as i64, (r.cols / self.fx(k)) as i64)
    }

    /// Origin of `to` implied by the origin of `from` across contiguity `e`.
    fn step(&self, from: usize, from_origin: (i64, i64), e: &Contiguity) -> (i64, i64) {
        let to = if e.before == from { e.after } else { e.before };
        let (src_from, src_to) = (&self.regions[from].rect, &self.regions[to].rect);
        match e.axis {
            Axis::X => {
                // Shared y factor; tops coincide whenever it exceeds one.
                let f = self.fy(from) as i64;
                let dr = (src_to.row as i64 - src_from.row as i64) / f;
                let dc = if e.before == from { self.size(from).1 } else { -self.size(to).1 };
                (from_origin.0 + dr, from_origin.1 + dc)
            }
            Axis::Y => {
                let f = self.fx(from) as i64;
                let dc = (src_to.col as i64 - src_from.col as i64) / f;
                let dr = if e.before == from { self.size(from).0 } else { -self.size(to).0 };
                (from_origin.0 + dr, from_origin.1 + dc)
            }
        }
    }

    fn layout(&self) -> Layout {
        let n = self.regions.len();
        let mut origin: Vec<Option<(i64, i64)>> = vec![None; n];
        let mut parent = vec![None; n];
        let mut conflicts = BTreeSet::new();

        for root in 0..n {
            if origin[root].is_some() {
                continue;
            }
            let r = &self.regions[root].rect;
            origin[root] = Some((r.row as i64, r.col as i64));
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let ou = origin[u].expect("queued regions are placed");
                for e in &self.adjacency[u] {
                    let v = if e.before == u { e.after } else { e.before };
                    let expected = self.step(u, ou, e);
                    match origin[v] {
                        None => {
                            origin[v] = Some(expected);
                            parent[v] = Some((u, *e));
                            queue.push_back(v);
                        }
                        Some(ov) if ov != expected => {
                            conflicts.insert((u.min(v), u.max(v)));
                        }
                        _ => {}
                    }
                }
            }
        }

        let origin: Vec<(i64, i64)> = origin.into_iter().map(|o| o.expect("every region placed")).collect();
        let mut layout = Layout { origin, parent, conflicts };
        self.raster_conflicts(&mut layout);
        layout
    }

    /// Overlaps and compressed adjacencies whose source blocks are not
    /// flush, aligned neighbors.
    fn raster_conflicts(&self, layout: &mut Layout) {
        let n = self.regions.len();
        if n == 0 {
            return;
        }
        let sizes: Vec<(i64, i64)> = (0..n).map(|k| self.size(k)).collect();
        let min_r = layout.origin.iter().map(|o| o.0).min().unwrap();
        let min_c = layout.origin.iter().map(|o| o.1).min().unwrap();
        let max_r = (0..n).map(|k| layout.origin[k].0 + sizes[k].0).max().unwrap();
        let max_c = (0..n).map(|k| layout.origin[k].1 + sizes[k].1).max().unwrap();
        let (h, w) = ((max_r - min_r) as usize, (max_c - min_c) as usize);
        let mut canvas: Grid2D<Option<usize>> = Grid2D::filled(h, w, None).expect("regions are non-empty");

        for k in 0..n {
            let (r0, c0) = (layout.origin[k].0 - min_r, layout.origin[k].1 - min_c);
            for dr in 0..sizes[k].0 {
                for dc in 0..sizes[k].1 {
                    let cell = Cell::new((r0 + dr) as usize, (c0 + dc) as usize);
                    if let Some(other) = canvas[cell] {
                        layout.conflicts.insert((other.min(k), other.max(k)));
                    }
                    canvas[cell] = Some(k);
                }
            }
        }

        let block = |k: usize, cell: Cell| -> Rect {
            let lr = cell.row as i64 - (layout.origin[k].0 - min_r);
            let lc = cell.col as i64 - (layout.origin[k].1 - min_c);
            let src = &self.regions[k].rect;
            let (fy, fx) = (self.fy(k), self.fx(k));
            Rect::new(src.row + lr as usize * fy, src.col + lc as usize * fx, fy, fx)
        };
        for (cell, &own) in canvas.iter() {
            let Some(a) = own else { continue };
            for (axis, nb) in [(Axis::X, canvas.offset(cell, 0, 1)), (Axis::Y, canvas.offset(cell, 1, 0))] {
                let Some(nb) = nb else { continue };
                let Some(b) = canvas[nb] else { continue };
                if a != b && !flush(&block(a, cell), &block(b, nb), axis) {
                    layout.conflicts.insert((a.min(b), a.max(b)));
                }
            }
        }
    }

    /// Greedily re-enables relaxed classes, largest saving first, keeping
    /// each one only if the layout stays free of conflicts.
    fn restore(&mut self, mut layout: Layout) -> Layout {
        let n = self.regions.len();
        let mut saving = vec![(0usize, 0usize); n];
        for (k, r) in self.regions.iter().enumerate() {
            let area = r.rect.area();
            saving[self.class_x[k]].0 += area - area / self.natural_x[self.class_x[k]];
            saving[self.class_y[k]].1 += area - area / self.natural_y[self.class_y[k]];
        }
        let mut candidates: Vec<(usize, Axis, usize)> = Vec::new();
        for c in 0..n {
            if self.factor_x[c] != self.natural_x[c] && saving[c].0 > 0 {
                candidates.push((saving[c].0, Axis::X, c));
            }
            if self.factor_y[c] != self.natural_y[c] && saving[c].1 > 0 {
                candidates.push((saving[c].1, Axis::Y, c));
            }
        }
        candidates.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        for (_, axis, c) in candidates {
            let (factors, natural) = match axis {
                Axis::X => (&mut self.factor_x, &self.natural_x),
                Axis::Y => (&mut self.factor_y, &self.natural_y),
            };
            let previous = std::mem::replace(&mut factors[c], natural[c]);
            let trial = self.layout();
            if trial.conflicts.is_empty() {
                layout = trial;
            } else {
                match axis {
                    Axis::X => self.factor_x[c] = previous,
                    Axis::Y => self.factor_y[c] = previous,
                }
            }
        }
        layout
    }

    /// Resets the factors that make the relative placement of `a` and `b`
    /// differ from the source. Returns whether anything changed.
    fn relax(&mut self, layout: &Layout, a: usize, b: usize) -> bool {
        let chain = |mut k: usize| {
            let mut out = vec![k];
            while let Some((p, _)) = layout.parent[k] {
                k = p;
                out.push(k);
            }
            out
        };
        let (ca, cb) = (chain(a), chain(b));
        let in_b: BTreeSet<usize> = cb.iter().copied().collect();
        let lca = ca.iter().copied().find(|k| in_b.contains(k));

        let mut to_reset_x = vec![a, b];
        let mut to_reset_y = vec![a, b];
        for chain in [&ca, &cb] {
            for &k in chain {
                if Some(k) == lca {
                    break;
                }
                if let Some((_, e)) = layout.parent[k] {
                    match e.axis {
                        Axis::X => to_reset_x.push(e.before),
                        Axis::Y => to_reset_y.push(e.before),
                    }
                }
            }
        }
        let mut changed = false;
        for k in to_reset_x {
            let c = self.class_x[k];
            changed |= std::mem::replace(&mut self.factor_x[c], 1) != 1;
        }
        for k in to_reset_y {
            let c = self.class_y[k];
            changed |= std::mem::replace(&mut self.factor_y[c], 1) != 1;
        }
        changed
    }
}

/// `b` sits immediately after `a` along `axis` with the identical span on
/// the other axis.
pub(crate) fn flush(a: &Rect, b: &Rect, axis: Axis) -> bool {
    match axis {
        Axis::X => b.col == a.right() && b.row == a.row && b.rows == a.rows,
        Axis::Y => b.row == a.bottom() && b.col == a.col && b.cols == a.cols,
    }
}

/// Plans a consistent compression of `env` toward an `n x n` canvas.
///
/// Environments already within `n x n` get the identity plan. Larger ones
/// are compressed as far as the contiguity constraints allow; when even that
/// exceeds `n x n` the plan is still returned, marked
/// [`FitStatus::DoesNotFit`].
pub fn plan_compression(regions: &[Region], env: &Environment, n: usize) -> CompressionPlan {
    let dims = env.dims();
    if dims.fits_within(n) || regions.is_empty() {
        return CompressionPlan::identity(regions, env, n);
    }

    let mut planner = Planner::new(regions, env);
    let layout = loop {
        let layout = planner.layout();
        if layout.conflicts.is_empty() {
            break layout;
        }
        let mut changed = false;
        for &(a, b) in &layout.conflicts {
            changed |= planner.relax(&layout, a, b);
        }
        assert!(changed, "layout conflict with all relevant factors at one");
    };
    let layout = planner.restore(layout);

    let sizes: Vec<(i64, i64)> = (0..regions.len()).map(|k| planner.size(k)).collect();
    let min_r = layout.origin.iter().map(|o| o.0).min().unwrap_or(0);
    let min_c = layout.origin.iter().map(|o| o.1).min().unwrap_or(0);
    let max_r = layout.origin.iter().zip(&sizes).map(|(o, s)| o.0 + s.0).max().unwrap_or(0);
    let max_c = layout.origin.iter().zip(&sizes).map(|(o, s)| o.1 + s.1).max().unwrap_or(0);
    let compressed = Dims::new((max_r - min_r) as usize, (max_c - min_c) as usize);
    if compressed.rows > dims.rows || compressed.cols > dims.cols {
        // Disconnected parts anchored apart can sprawl past the source.
        return CompressionPlan::identity(regions, env, n);
    }

    let plans: Vec<RegionPlan> = regions
        .iter()
        .enumerate()
        .map(|(k, r)| RegionPlan {
            id: r.id,
            tuple: r.tuple,
            source: r.rect,
            factor_x: planner.fx(k),
            factor_y: planner.fy(k),
            compressed: Rect::new(
                (layout.origin[k].0 - min_r) as usize,
                (layout.origin[k].1 - min_c) as usize,
                sizes[k].0 as usize,
                sizes[k].1 as usize,
            ),
        })
        .collect();

    // Content is anchored at the source bounding box of navigable cells.
    let top = regions.iter().map(|r| r.rect.row).min().unwrap_or(0);
    let left = regions.iter().map(|r| r.rect.col).min().unwrap_or(0);
    let trim = Trim {
        top,
        left,
        bottom: dims.rows.saturating_sub(top + compressed.rows),
        right: dims.cols.saturating_sub(left + compressed.cols),
    };

    CompressionPlan {
        version: PLAN_VERSION,
        target_n: n,
        original: dims,
        compressed,
        trim,
        status: fit_status(compressed, n),
        regions: plans,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{check_consistency, segment_regions, visibility};
    use crate::grid::Scenario;

    fn env(rows: &[&str]) -> Environment {
        Scenario::from_ascii(&rows.iter().map(|r| r.replace('.', "G")).collect::<Vec<_>>(), 0.5, 0).unwrap().env
    }

    fn plan(e: &Environment, n: usize) -> CompressionPlan {
        plan_compression(&segment_regions(&visibility(e), e), e, n)
    }

    #[test]
    fn small_environment_gets_identity() {
        let e = env(&["..#", "...", "#.."]);
        let p = plan(&e, 8);
        assert!(p.is_identity());
        assert!(p.fits());
        assert_eq!(p.trim, Trim::default());
        assert!(p.capacity_x().values().iter().all(|&c| c == 1));
    }

    #[test]
    fn open_room_collapses_to_one_cell() {
        let e = Environment::open(40, 30).unwrap();
        let p = plan(&e, 8);
        assert_eq!(p.compressed, Dims::new(1, 1));
        assert_eq!(p.regions[0].capacity(), 1200);
        assert!(p.fits());
        assert_eq!(check_consistency(&p, &e), vec![]);
    }

    #[test]
    fn planned_layouts_are_consistent() {
        let e = env(&[
            "..........#.....",
            "..........#.....",
            "................",
            "#####.######.###",
            "......#.........",
            "......#.........",
            "................",
            "......#.........",
        ]);
        let p = plan(&e, 4);
        assert_eq!(check_consistency(&p, &e), vec![]);
        assert!(p.compressed.area() < e.dims().area());
    }
}
