use std::collections::VecDeque;

use rand::Rng;

use super::{default_cell_width, Floorplan, FloorplanConfig, Hallways, Room};
use crate::grid::{flood_fill, Cell, Environment, Grid2D, Rect};

/// Greedy row-major tiling of the free cells into rectangles. A leftover
/// strip narrower than the minimum room side is absorbed into its neighbor.
fn tile(free: &Grid2D<bool>, cfg: &FloorplanConfig, rng: &mut impl Rng) -> (Vec<Rect>, Grid2D<Option<usize>>) {
    let sizes = &cfg.rooms;
    let mut owner: Grid2D<Option<usize>> = free.map(|_| None);
    let mut tiles = Vec::new();
    let mut prev: Option<(usize, (usize, usize))> = None;

    for cell in free.cells() {
        if !free[cell] || owner[cell].is_some() {
            continue;
        }
        let (mut h, w) = match prev {
            Some((_, size)) if rng.gen_bool(sizes.share) => size,
            _ => (rng.gen_range(sizes.min..=sizes.max), rng.gen_range(sizes.min..=sizes.max)),
        };
        // Rooms continuing along a row keep the depth of the band.
        if let Some((row, (band, _))) = prev {
            if row == cell.row {
                h = band;
            }
        }
        let open = |c: Cell, owner: &Grid2D<Option<usize>>| free[c] && owner[c].is_none();

        let run_w = (cell.col..free.cols()).take_while(|&c| open(Cell::new(cell.row, c), &owner)).count();
        let mut tw = w.min(run_w);
        if run_w - tw < sizes.min {
            tw = run_w;
        }
        let run_h = (cell.row..free.rows())
            .take_while(|&r| (cell.col..cell.col + tw).all(|c| open(Cell::new(r, c), &owner)))
            .count();
        let mut th = h.min(run_h);
        if run_h - th < sizes.min {
            th = run_h;
        }
        prev = Some((cell.row, (th, w)));
        let rect = Rect::new(cell.row, cell.col, th, tw);
        for c in rect.cells() {
            owner[c] = Some(tiles.len());
        }
        tiles.push(rect);
    }
    (tiles, owner)
}

/// Interior of a tile once its walls are placed. A tile walls its top and
/// left sides against any other in-shape cell, and its bottom and right
/// sides against hallway, so neighboring rooms share a single wall.
fn interior(t: usize, rect: &Rect, mask: &Grid2D<bool>, hall: &Grid2D<bool>, owner: &Grid2D<Option<usize>>) -> Option<Rect> {
    let foreign = |c: Option<Cell>| c.is_some_and(|c| mask[c] && owner[c] != Some(t));
    let hallway = |c: Option<Cell>| c.is_some_and(|c| hall[c]);
    let top = (rect.col..rect.right()).any(|c| foreign(mask.offset(Cell::new(rect.row, c), -1, 0)));
    let left = (rect.row..rect.bottom()).any(|r| foreign(mask.offset(Cell::new(r, rect.col), 0, -1)));
    let bottom = (rect.col..rect.right()).any(|c| hallway(mask.offset(Cell::new(rect.bottom() - 1, c), 1, 0)));
    let right = (rect.row..rect.bottom()).any(|r| hallway(mask.offset(Cell::new(r, rect.right() - 1), 0, 1)));
    let rows = rect.rows.checked_sub(top as usize + bottom as usize)?;
    let cols = rect.cols.checked_sub(left as usize + right as usize)?;
    (rows > 0 && cols > 0).then(|| Rect::new(rect.row + top as usize, rect.col + left as usize, rows, cols))
}

/// Path length through the shape to the nearest hallway cell, ignoring walls.
fn hallway_distance(mask: &Grid2D<bool>, hall: &Grid2D<bool>) -> Grid2D<u32> {
    let mut dist = mask.map(|_| u32::MAX);
    let mut queue = VecDeque::new();
    for (c, &h) in hall.iter() {
        if h {
            dist[c] = 0;
            queue.push_back(c);
        }
    }
    while let Some(c) = queue.pop_front() {
        for nb in mask.neighbors4(c) {
            if mask[nb] && dist[nb] == u32::MAX {
                dist[nb] = dist[c] + 1;
                queue.push_back(nb);
            }
        }
    }
    dist
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Door {
    distance: u32,
    wall: Cell,
    outside: Cell,
}

/// Stage three: rooms, walls and doors in the space the hallways leave.
pub fn populate_rooms(mask: &Grid2D<bool>, hallways: &Hallways, cfg: &FloorplanConfig) -> Floorplan {
    let mut rng = crate::seed::rng(crate::seed::derive_seed(cfg.seed, 2));
    let hall = &hallways.mask;
    let free = Grid2D::from_fn(mask.rows(), mask.cols(), |c| mask[c] && !hall[c]).expect("same dims");
    let (tiles, owner) = tile(&free, cfg, &mut rng);

    let interiors: Vec<Option<Rect>> =
        tiles.iter().enumerate().map(|(t, r)| interior(t, r, mask, hall, &owner)).collect();
    let mut room_of: Grid2D<Option<usize>> = mask.map(|_| None);
    for (t, int) in interiors.iter().enumerate() {
        for c in int.iter().flat_map(|r| r.cells()) {
            room_of[c] = Some(t);
        }
    }

    // Straight single-cell doorways through a wall, one side inside a room.
    let dist = hallway_distance(mask, hall);
    let open = |c: Cell| hall[c] || room_of[c].is_some();
    let mut candidates: Vec<Vec<Door>> = vec![Vec::new(); tiles.len()];
    for wall in mask.cells() {
        if owner[wall].is_none() || room_of[wall].is_some() {
            continue;
        }
        for (dr, dc) in [(1, 0), (0, 1)] {
            let (Some(a), Some(b)) = (mask.offset(wall, -dr, -dc), mask.offset(wall, dr, dc)) else { continue };
            for (inside, outside) in [(a, b), (b, a)] {
                if let Some(t) = room_of[inside] {
                    if open(outside) && room_of[outside] != Some(t) {
                        candidates[t].push(Door { distance: dist[outside], wall, outside });
                    }
                }
            }
        }
    }
    for c in &mut candidates {
        c.sort();
    }

    let mut doors: Vec<Vec<Cell>> = candidates.iter().map(|c| c.first().map(|d| d.wall).into_iter().collect()).collect();
    let navigable = |doors: &Vec<Vec<Cell>>| {
        let mut nav = Grid2D::from_fn(mask.rows(), mask.cols(), open).expect("same dims");
        for c in doors.iter().flatten() {
            nav[*c] = true;
        }
        nav
    };
    let seeds: Vec<Cell> = match hall.iter().find(|(_, &h)| h) {
        Some((c, _)) => vec![c],
        None => room_of.iter().find(|(_, r)| r.is_some()).map(|(c, _)| c).into_iter().collect(),
    };
    let mut reach = flood_fill(&navigable(&doors), seeds.iter().copied());
    loop {
        let mut changed = false;
        for (t, int) in interiors.iter().enumerate() {
            let Some(int) = int else { continue };
            if reach[Cell::new(int.row, int.col)] {
                continue;
            }
            if let Some(d) = candidates[t].iter().find(|d| reach[d.outside]) {
                doors[t].push(d.wall);
                changed = true;
            }
        }
        if !changed {
            break;
        }
        reach = flood_fill(&navigable(&doors), seeds.iter().copied());
    }

    let mut rooms = Vec::new();
    let mut room_ids = mask.map(|_| None);
    let mut nav = hall.clone();
    for (t, int) in interiors.iter().enumerate() {
        let Some(int) = int else { continue };
        if !reach[Cell::new(int.row, int.col)] {
            continue;
        }
        let id = rooms.len() as u32;
        for c in int.cells().chain(doors[t].iter().copied()) {
            room_ids[c] = Some(id);
            nav[c] = true;
        }
        rooms.push(Room { id, tile: tiles[t], interior: *int, doors: doors[t].clone() });
    }

    Floorplan {
        config: cfg.clone(),
        env: Environment::from_navigable(&nav, default_cell_width()).expect("hallways are never empty"),
        hallway: hall.clone(),
        hallway_rects: hallways.rects.clone(),
        room_ids,
        rooms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floorplan::{check_floorplan, Morphology, Organization};

    #[test]
    fn hallway_filling_the_shape_leaves_no_rooms() {
        let cfg = FloorplanConfig::new(Morphology::Point, Organization::VerticalPoint, 6, 6, 0);
        let mask = Grid2D::filled(6, 6, true).unwrap();
        let h = Hallways { mask: mask.clone(), rects: vec![Rect::new(0, 0, 6, 6)] };
        let f = populate_rooms(&mask, &h, &cfg);
        assert!(f.rooms.is_empty());
        assert_eq!(check_floorplan(&f), vec![]);
    }

    #[test]
    fn room_beside_a_corridor_opens_onto_it() {
        // A 2-wide corridor along the top of a 10x8 shape, one 8x8 block below.
        let cfg = FloorplanConfig { rooms: crate::floorplan::RoomSizes { min: 8, max: 8, share: 0.0 }, ..FloorplanConfig::new(Morphology::Point, Organization::CorridorEdge, 10, 8, 0) };
        let mask = Grid2D::filled(10, 8, true).unwrap();
        let hall = Grid2D::from_fn(10, 8, |c| c.row < 2).unwrap();
        let f = populate_rooms(&mask, &Hallways { mask: hall, rects: vec![Rect::new(0, 0, 2, 8)] }, &cfg);
        assert_eq!(f.rooms.len(), 1);
        let room = &f.rooms[0];
        assert_eq!(room.tile, Rect::new(2, 0, 8, 8));
        assert_eq!(room.interior, Rect::new(3, 0, 7, 8));
        assert_eq!(room.doors, vec![Cell::new(2, 0)]);
        assert_eq!(check_floorplan(&f), vec![]);
    }
}
