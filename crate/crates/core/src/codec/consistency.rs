use serde::{Deserialize, Serialize};

use super::plan::{contiguities, flush, CompressionPlan};
use crate::grid::{Axis, Cell, Dims, Environment, Grid2D, Rect};

/// A way in which a plan fails to preserve the source environment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConsistencyViolation {
    DimsMismatch { plan: Dims, env: Dims },
    /// Capacity does not divide the region extent, or is zero.
    FactorNotDivisor { region: usize, axis: Axis, extent: usize, factor: usize },
    CompressedExtentMismatch { region: usize },
    OutOfBounds { region: usize },
    RegionCoversObstacle { region: usize, cell: Cell },
    CellUncovered(Cell),
    CellCoveredTwice(Cell),
    /// Regions contiguous along `axis` carry different capacities along the
    /// perpendicular axis.
    Constraint1 { a: usize, b: usize, axis: Axis },
    /// Regions contiguous along `axis` are compressed along the
    /// perpendicular axis but span different intervals on it.
    Constraint2 { a: usize, b: usize, axis: Axis },
    Overlap(Cell),
    /// Compressed neighbors `a`, `b` whose source blocks are not flush,
    /// aligned neighbors in the source environment.
    AdjacencyCreated { a: Cell, b: Cell },
    /// Source neighbors `a`, `b` whose compressed cells are not neighbors in
    /// the same direction.
    AdjacencyRemoved { a: Cell, b: Cell },
}

/// Lists every way `plan` would disturb navigability of `env`; empty means
/// the plan is lossless.
pub fn check_consistency(plan: &CompressionPlan, env: &Environment) -> Vec<ConsistencyViolation> {
    use ConsistencyViolation as V;

    let dims = env.dims();
    if plan.original != dims {
        return vec![V::DimsMismatch { plan: plan.original, env: dims }];
    }
    let mut out = Vec::new();

    for (k, r) in plan.regions.iter().enumerate() {
        let mut shape_ok = true;
        for (axis, extent, factor) in [(Axis::X, r.source.cols, r.factor_x), (Axis::Y, r.source.rows, r.factor_y)] {
            if factor == 0 || extent % factor != 0 {
                out.push(V::FactorNotDivisor { region: k, axis, extent, factor });
                shape_ok = false;
            }
        }
        if shape_ok && (r.compressed.rows * r.factor_y != r.source.rows || r.compressed.cols * r.factor_x != r.source.cols)
        {
            out.push(V::CompressedExtentMismatch { region: k });
            shape_ok = false;
        }
        if r.source.bottom() > dims.rows
            || r.source.right() > dims.cols
            || r.compressed.bottom() > plan.compressed.rows
            || r.compressed.right() > plan.compressed.cols
        {
            out.push(V::OutOfBounds { region: k });
            shape_ok = false;
        }
        if !shape_ok {
            continue;
        }
        if let Some(cell) = r.source.cells().find(|&c| !env.is_navigable(c)) {
            out.push(V::RegionCoversObstacle { region: k, cell });
        }
    }
    if !out.is_empty() {
        return out;
    }

    let mut cover = Grid2D::filled(dims.rows, dims.cols, 0u32).expect("non-empty");
    for r in &plan.regions {
        for c in r.source.cells() {
            cover[c] += 1;
        }
    }
    for (cell, &count) in cover.iter() {
        match (env.is_navigable(cell), count) {
            (true, 0) => out.push(V::CellUncovered(cell)),
            (_, n) if n > 1 => out.push(V::CellCoveredTwice(cell)),
            _ => {}
        }
    }
    if !out.is_empty() {
        return out;
    }

    let src_owner = plan.source_owners();
    for e in contiguities(&src_owner) {
        let (a, b) = (&plan.regions[e.before], &plan.regions[e.after]);
        let (fa, fb, span_a, span_b) = match e.axis {
            Axis::X => (a.factor_y, b.factor_y, (a.source.row, a.source.rows), (b.source.row, b.source.rows)),
            Axis::Y => (a.factor_x, b.factor_x, (a.source.col, a.source.cols), (b.source.col, b.source.cols)),
        };
        if fa != fb {
            out.push(V::Constraint1 { a: e.before, b: e.after, axis: e.axis });
        } else if fa > 1 && span_a != span_b {
            out.push(V::Constraint2 { a: e.before, b: e.after, axis: e.axis });
        }
    }

    // Compressed canvas: owners, overlaps, created adjacencies.
    let cdims = plan.compressed;
    if cdims.area() == 0 {
        return out;
    }
    let mut owner: Grid2D<Option<usize>> = Grid2D::filled(cdims.rows, cdims.cols, None).expect("non-empty");
    for (k, r) in plan.regions.iter().enumerate() {
        for c in r.compressed.cells() {
            if owner[c].is_some() {
                out.push(V::Overlap(c));
            }
            owner[c] = Some(k);
        }
    }
    let block = |cell: Cell| -> Option<Rect> { owner[cell].map(|k| plan.regions[k].source_block(cell)) };
    for cell in owner.cells() {
        let Some(ba) = block(cell) else { continue };
        for (axis, nb) in [(Axis::X, owner.offset(cell, 0, 1)), (Axis::Y, owner.offset(cell, 1, 0))] {
            let Some(nb) = nb else { continue };
            let Some(bb) = block(nb) else { continue };
            if !flush(&ba, &bb, axis) {
                out.push(V::AdjacencyCreated { a: cell, b: nb });
            }
        }
    }

    // Source adjacencies must survive as compressed adjacencies.
    for cell in src_owner.cells() {
        let Some(ka) = src_owner[cell] else { continue };
        let ca = plan.regions[ka].compressed_cell(cell);
        for (dr, dc, nb) in [(0, 1, src_owner.offset(cell, 0, 1)), (1, 0, src_owner.offset(cell, 1, 0))] {
            let Some(nb) = nb else { continue };
            let Some(kb) = src_owner[nb] else { continue };
            let cb = plan.regions[kb].compressed_cell(nb);
            if ca == cb && ka == kb {
                continue;
            }
            if Some(cb) != owner.offset(ca, dr, dc) || owner[cb] != Some(kb) {
                out.push(V::AdjacencyRemoved { a: cell, b: nb });
            }
        }
    }
    out
}
