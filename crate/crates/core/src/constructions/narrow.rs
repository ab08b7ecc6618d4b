use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{moves_from, Move, MoveSequence};
use crate::error::{Error, Result};
use crate::geometry::Topology;
use crate::tiling::Tiling;
use crate::verify::validate_tiling;

/// Tiling states explored per frontier before giving up.
const MAX_FRONTIER_STATES: usize = 200_000;

/// Canonical triomino tiling of a board of height 2 (horizontal bars) or
/// height 3 (vertical bars).
pub fn narrow_canonical(topo: &Topology) -> Result<Tiling> {
    let (w, h) = (topo.width, topo.height);
    if topo.wrap || !(h == 2 || h == 3) {
        return Err(Error::Unsupported(format!("narrow canonicalization needs a 2×n or 3×n grid, got {topo}")));
    }
    let labels: Vec<u32> = match h {
        2 if w % 3 == 0 => (0..2 * w).map(|c| ((c / w) * w + (c % w) / 3 * 3) as u32).collect(),
        2 => return Err(Error::NoTilingPossible(format!("{topo} has no triomino tiling"))),
        _ => (0..3 * w).map(|c| (c % w) as u32).collect(),
    };
    Ok(Tiling::from_labels(*topo, 3, labels))
}

/// Moves to the canonical tiling, grouped by the unit of columns they fix:
/// three columns on height 2, one column on height 3.
#[derive(Debug, Clone, Serialize)]
pub struct NarrowCanonicalization {
    pub moves: MoveSequence,
    /// Moves spent on each unit, left to right.
    pub moves_per_unit: Vec<usize>,
    /// Columns per unit.
    pub unit_width: usize,
}

impl NarrowCanonicalization {
    pub fn max_moves_per_unit(&self) -> usize {
        self.moves_per_unit.iter().copied().max().unwrap_or(0)
    }
}

fn column(topo: &Topology, cell: usize) -> usize {
    cell % topo.width
}

/// Number of leading units already tiled canonically.
fn canonical_units(tiling: &Tiling, target: &Tiling, unit: usize) -> usize {
    let topo = tiling.topology();
    let units = topo.width / unit;
    let target_tiles = target.tiles();
    let tiles = tiling.tiles();
    let mut done = 0;
    'units: for u in 0..units {
        for tile in &target_tiles {
            if column(topo, tile[0]) / unit == u {
                let l = tiling.label(tile[0]);
                if tile.iter().any(|&c| tiling.label(c) != l) || tiles[l as usize].len() != tile.len() {
                    break 'units;
                }
            }
        }
        done = u + 1;
    }
    done
}

/// Fixes the leftmost non-canonical unit with a shortest sequence of moves
/// that leave the finished units untouched, then repeats.
pub fn narrow_triomino_canonicalize(tiling: &Tiling) -> Result<NarrowCanonicalization> {
    if tiling.t() != 3 {
        return Err(Error::ContractViolation(format!("expected a triomino tiling, got t = {}", tiling.t())));
    }
    let topo = *tiling.topology();
    let target = narrow_canonical(&topo)?;
    validate_tiling(tiling).map_err(|d| Error::ContractViolation(d.to_string()))?;
    let unit = if topo.height == 2 { 3 } else { 1 };
    let units = topo.width / unit;

    let mut current = tiling.clone();
    let mut moves = MoveSequence::default();
    let mut moves_per_unit = Vec::with_capacity(units);
    loop {
        let done = canonical_units(&current, &target, unit);
        moves_per_unit.resize(done, 0);
        if done == units {
            break;
        }
        let frozen = done * unit;
        let allow = move |tile: &[usize]| tile.iter().all(|&c| column(&topo, c) >= frozen);
        let path = shortest_fix(&current, &target, unit, done, &allow)?;
        moves_per_unit.push(path.len());
        for mv in path {
            current = mv.apply(&current)?;
            moves.moves.push(mv);
        }
    }
    Ok(NarrowCanonicalization { moves, moves_per_unit, unit_width: unit })
}

fn shortest_fix(
    start: &Tiling,
    target: &Tiling,
    unit: usize,
    done: usize,
    allow: &dyn Fn(&[usize]) -> bool,
) -> Result<Vec<Move>> {
    let mut parent: HashMap<Vec<u32>, Option<(Vec<u32>, Move)>> = HashMap::new();
    parent.insert(start.labels().to_vec(), None);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(tiling) = queue.pop_front() {
        if canonical_units(&tiling, target, unit) > done {
            let mut path = Vec::new();
            let mut key = tiling.labels().to_vec();
            while let Some(Some((prev, mv))) = parent.get(&key) {
                path.push(mv.clone());
                key = prev.clone();
            }
            path.reverse();
            return Ok(path);
        }
        if parent.len() > MAX_FRONTIER_STATES {
            break;
        }
        for (mv, next) in moves_from(&tiling, allow)? {
            if !parent.contains_key(next.labels()) {
                parent.insert(next.labels().to_vec(), Some((tiling.labels().to_vec(), mv)));
                queue.push_back(next);
            }
        }
    }
    Err(Error::Internal(format!("no move sequence completes unit {done}")))
}
